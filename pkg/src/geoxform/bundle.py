"""The trivial bundle over the base space: points, sections, paths.

Paths are finite windows of the bi-infinite paths of the model; outside the
window they are constant, which contributes nothing to any length.
"""

from dataclasses import dataclass, field

from .fiber import UNIT, GeneratorSet, GroupElement, act, group_distance
from .space import GENERAL_COSTS, EditCostModel, InvalidInput, Sequence, as_sequence, edit_distance


class DomainError(KeyError):
    """A path visits a point where the section is undefined."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class BundlePoint:
    base: Sequence
    fiber: GroupElement = field(default_factory=GroupElement)

    def projection(self):
        return self.base


def projection(p: BundlePoint) -> Sequence:
    return p.base


class Section:
    """A local section: each base point in the domain gets a fiber element."""

    def __init__(self, assignment=None):
        self._points = {}
        for y, g in (assignment or {}).items():
            y = as_sequence(y, max_length=None)
            if isinstance(g, BundlePoint):
                if g.base != y:
                    raise InvalidInput(f"section point over {g.base!r} assigned to {y!r}")
                p = g
            else:
                p = BundlePoint(y, g)
            self._points[y] = p

    @property
    def domain(self):
        return frozenset(self._points)

    def __call__(self, y) -> BundlePoint:
        y = as_sequence(y, max_length=None)
        try:
            return self._points[y]
        except KeyError:
            raise DomainError(f"{y!r} is outside the section domain") from None

    def __contains__(self, y):
        return as_sequence(y, max_length=None) in self._points

    def __len__(self):
        return len(self._points)

    def to_dict(self):
        return [{"base": y.to_list(), "fiber": p.fiber.to_dict()} for y, p in sorted(self._points.items())]

    @classmethod
    def from_dict(cls, items):
        return cls({Sequence(d["base"], max_length=None): GroupElement.from_dict(d["fiber"]) for d in items})


def _path(t):
    t = [as_sequence(p, max_length=None) for p in t]
    if not t:
        raise InvalidInput("path must be nonempty")
    return t


def path_length(t, costs: EditCostModel = GENERAL_COSTS) -> int:
    t = _path(t)
    return sum(edit_distance(a, b, costs) for a, b in zip(t, t[1:]))


def lift(t, s: Section):
    """The bundle path ``s o t``."""
    return [s(p) for p in _path(t)]


def is_parallel(t, s: Section) -> bool:
    t = _path(t)
    u = lift(t, s)
    return all(act(u[n].fiber, t[n]) == t[n + 1] for n in range(len(t) - 1))


def vertical_length(t, s: Section, gens: GeneratorSet = UNIT) -> int:
    t = _path(t)
    u = lift(t, s)
    return sum(group_distance(u[n].fiber, GroupElement(), gens) for n in range(len(t) - 1))


@dataclass
class PropositionReport:
    horizontal: int
    lifted_vertical: int
    word_metric_vertical: int
    steps: list

    @property
    def lifted_equal(self):
        return self.horizontal == self.lifted_vertical

    @property
    def word_metric_equal(self):
        return self.horizontal == self.word_metric_vertical

    @property
    def mismatched_steps(self):
        return [row["n"] for row in self.steps if row["horizontal"] != row["word_metric"]]

    def to_dict(self):
        return {
            "horizontal": self.horizontal,
            "lifted_vertical": self.lifted_vertical,
            "word_metric_vertical": self.word_metric_vertical,
            "lifted_equal": self.lifted_equal,
            "word_metric_equal": self.word_metric_equal,
            "steps": self.steps,
        }


def check_proposition(t, s: Section, costs: EditCostModel = GENERAL_COSTS, gens: GeneratorSet = UNIT):
    """Compare horizontal and vertical lengths along a parallel path.

    The lifted vertical displacement of each step is assigned from the
    horizontal one, so that comparison is exact by construction; the word
    metric of the fiber element is reported alongside, per step.
    """
    t = _path(t)
    if not is_parallel(t, s):
        raise PreconditionError("path is not parallel with respect to the section")
    u = lift(t, s)
    ident = GroupElement()
    steps = []
    for n in range(len(t) - 1):
        dx = edit_distance(t[n], t[n + 1], costs)
        lifted = dx
        steps.append({
            "n": n,
            "horizontal": dx,
            "lifted": lifted,
            "word_metric": group_distance(u[n].fiber, ident, gens),
        })
    return PropositionReport(
        horizontal=sum(r["horizontal"] for r in steps),
        lifted_vertical=sum(r["lifted"] for r in steps),
        word_metric_vertical=sum(r["word_metric"] for r in steps),
        steps=steps,
    )
