"""Transformations of byte sequences split into semantic edits and invertible syntactic moves."""

from .space import (ALPHABET, GENERAL_COSTS, NULL, INSDEL_COSTS, EditCostModel, InvalidInput, Sequence,
                    apply_edit, as_sequence, edit_distance, edit_script, parse_word, render)
from .fiber import (PRIME31, ROT13, UNIT, GeneratorSet, GroupElement, Rot13Element, act, compose,
                    group_distance, inverse, rot13, solve_transporter)
from .bundle import (BundlePoint, DomainError, PreconditionError, Section, check_proposition, is_parallel,
                     lift, path_length, projection, vertical_length)
from .search import (BudgetExceeded, GoalSpec, MoveConfig, ReplayError, Step, TransformScript,
                     find_transform, insdel_config, replay, rot13_config, rot13_goal, rot13_objective)
from .rewrite import (RULES, AnnotatedFile, Annotation, CompositionError, IntegrityError,
                      RegionOverlapError, RewriteRule, apply_rewrite, compose_rewrites, invert_rewrite,
                      rewrite_stages, scan_annotations)
from .synlang import (SKELETON, AstNode, CfgGraph, CstNode, ParseError, abstract, from_cfg, parse,
                      to_cfg, unparse, unparse_cst)
from .treedist import LabeledTree, LabelMetric, ast_distance, parse_tree, tree, tree_edit_distance

__version__ = "0.1.0"
