"""Enlarged massive orbits, openness of the square-class condition, and the
descent chain through null directions.

A null choice splits off a hyperbolic plane and hands the question to the
complement, two dimensions down; the chain report records every stage and
the verdict the walk forces.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import NotIsometric, NotMassive, NotNull, NotRepresented
from .orthogonal import orbit_classify
from .padic import PadicNumber, all_square_classes, is_square, square_class_ball
from .poincare import NullDecomposition
from .quadspace import QuadSpace, VecV, is_isotropic, isotropic_vector, represent, witt_equivalent
from .sampling import random_int_vector


def enlarged_orbit_member(space: QuadSpace, x: VecV, y: VecV) -> bool:
    """Whether y lies in the dilation-enlarged orbit of a massive x.

    The enlarged orbit of x sweeps out every vector whose Q-value differs
    from Q(x) by a square factor.
    """
    qx = space.q(x)
    if qx.is_zero:
        raise NotMassive("the enlarged orbit is defined over a massive vector")
    qy = space.q(y)
    if qy.is_zero:
        return False
    return is_square(qy / qx)


def _perturbation_scale(space, x, qx):
    k = square_class_ball(qx)
    vx = min(c.valuation for c in x.coords if not c.is_zero)
    vd = min(d.valuation for d in space.diag)
    # v(2 B(x, d) + Q(d)) >= min(vx, 0) + min(vd, 0) + m for coords of d at
    # valuation >= m; push that past v(qx) + k
    return qx.valuation + k + 1 - min(vx, 0) - min(vd, 0)


def openness_demo(space: QuadSpace, x: VecV, rng, trials: int = 20) -> dict:
    """Show the enlarged orbit of x is open and strictly bigger than the
    plain orbit, and that escaping it takes a square-class jump.

    Perturbations within the square-class ball of Q(x) stay members; a
    vector representing a nonsquare multiple of Q(x) leaves the enlarged
    orbit; rescaling x keeps the enlarged orbit but exits the exact level
    set, hence the plain orbit.
    """
    p = space.prime
    qx = space.q(x)
    if qx.is_zero:
        raise NotMassive("openness is about massive vectors")
    m = _perturbation_scale(space, x, qx)
    scale = PadicNumber.from_int(p, p) ** m
    inside = 0
    for _ in range(trials):
        delta = scale * random_int_vector(space, rng)
        if enlarged_orbit_member(space, x, x + delta):
            inside += 1

    escape = None
    for cls in all_square_classes(p):
        if cls.rep == 1:
            continue
        try:
            escape = represent(space, PadicNumber.from_int(cls.rep, p) * qx)
            break
        except NotRepresented:
            continue

    stretched = (1 + PadicNumber.from_int(p, p)) * x
    level_exit = (
        enlarged_orbit_member(space, x, stretched)
        and not (space.q(stretched) == qx)
    )
    return {
        "trials": trials,
        "inside_ball_members": inside,
        "ball_radius_exponent": square_class_ball(qx),
        "escape_found": escape is not None,
        "escape_vector": escape.to_record() if escape is not None else None,
        "escape_is_member": (
            enlarged_orbit_member(space, x, escape) if escape is not None else None
        ),
        "level_set_exit": level_exit,
    }


def descend(space: QuadSpace, pv: VecV):
    """Split off the hyperbolic plane through a null pv; return (W, split).

    W is the orthogonal complement of the plane, certified Witt equivalent
    to the input space.
    """
    if pv.is_zero or not space.q(pv).is_zero:
        raise NotNull("descent starts from a nonzero null vector")
    decomp = NullDecomposition.from_null_vector(space, pv)
    if not witt_equivalent(space, decomp.w_space):
        raise NotIsometric("descent lost the Witt class")
    return decomp.w_space, decomp


# -- choosers -----------------------------------------------------------------


def chooser_null_first():
    """Pick a null vector whenever the space has one and dim >= 3."""

    def choose(stage, space):
        if space.dim >= 3 and is_isotropic(space):
            return isotropic_vector(space)
        return None

    return choose


def chooser_massive_at(k: int):
    """Descend null-first, but pick a massive vector at stage k."""
    fallback = chooser_null_first()

    def choose(stage, space):
        if stage == k and space.dim >= 1:
            return space.basis_vector(0)
        return fallback(stage, space)

    return choose


def chooser_from_choices(choices):
    """Replay a recorded list of choices: each entry is "trivial" or a
    coordinate list of rationals; the chain stops when the list runs out."""
    items = list(choices)

    def choose(stage, space):
        if stage >= len(items):
            return None
        entry = items[stage]
        if entry == "trivial":
            return space.zero_vector()
        coords = [Fraction(str(c)) for c in entry]
        if len(coords) != space.dim:
            raise ValueError(
                f"stage {stage} expects {space.dim} coordinates, got {len(coords)}"
            )
        return space.vector(coords)

    return choose


# -- the chain ------------------------------------------------------------------


class ChainReport:
    """Stages and verdict of one descent walk."""

    __slots__ = ("stages", "verdict")

    def __init__(self, stages, verdict):
        self.stages = stages
        self.verdict = verdict

    @property
    def descents(self) -> int:
        return sum(1 for s in self.stages if s["orbit"] == "massless")

    def to_dict(self) -> dict:
        return {"schema": 1, "stages": self.stages, "verdict": self.verdict}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return f"ChainReport({self.verdict}, stages={len(self.stages)})"


def _balanced(d):
    # smallest-magnitude integer representative of the unit's residue class
    mod = d.prime**d.precision
    u = d.unit if d.unit <= mod // 2 else d.unit - mod
    return Fraction(u) * Fraction(d.prime) ** d.valuation


def _stage_record(space, pick, orbit_kind):
    diag = [str(_balanced(d)) for d in space.diag]
    return {
        "dim": space.dim,
        "diag": diag,
        "witt_index": space.witt_index,
        "chosen": "trivial" if orbit_kind == "trivial" else (
            None if pick is None else pick.to_record()
        ),
        "orbit": orbit_kind or "none",
    }


def chain_descent(space: QuadSpace, chooser) -> ChainReport:
    """Walk the descent chain until a massive or terminal stage.

    Each stage asks the chooser for a vector of the current space.  A
    massive choice ends the walk (EventuallyMassive), a null choice splits
    off a hyperbolic plane and continues in the complement, the zero vector
    or an exhausted chooser terminates; the verdict records whether any
    descent happened (MasslessTower) or the walk died on the spot
    (TerminatedAnisotropic / TerminatedTrivial).
    """
    stages = []
    current = space
    saw_massive = False
    descents = 0
    stage = 0
    while True:
        pick = chooser(stage, current)
        if pick is None:
            stages.append(_stage_record(current, None, None))
            break
        orbit = orbit_classify(current, pick)
        stages.append(_stage_record(current, pick, orbit.kind))
        if orbit.kind == "trivial":
            break
        if orbit.kind == "massive":
            saw_massive = True
            break
        current, _ = descend(current, pick)
        descents += 1
        stage += 1
    if saw_massive:
        verdict = "EventuallyMassive"
    elif descents:
        verdict = "MasslessTower"
    elif not is_isotropic(space):
        verdict = "TerminatedAnisotropic"
    else:
        verdict = "TerminatedTrivial"
    return ChainReport(stages, verdict)


def conformal_symmetry_verdict(report: ChainReport) -> str:
    """Impossible exactly when some stage went massive; NotExcluded otherwise."""
    return "Impossible" if report.verdict == "EventuallyMassive" else "NotExcluded"
