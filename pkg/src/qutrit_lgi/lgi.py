"""Probability tables, inferred quasi-probabilities, correlators and the
signalling-corrected Leggett-Garg inequalities for a two-step qutrit evolution.

Tables are 3x3 arrays indexed ``[n3, second]`` where ``second`` is the
intermediate outcome n2 (unambiguous, inferred) or the ambiguous outcome
alpha, which is indexed by the blocked mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .core import (
    NORM_TOL,
    EulerAngles,
    InvalidInputError,
    Outcome,
    QutritState,
    block,
    born_probs,
    build_unitary,
    evolve,
    project,
)

ANGLE_NAMES = ("theta1", "chi1", "phi1", "theta2", "chi2", "phi2")


@dataclass(frozen=True)
class EvolutionConfig:
    angles1: EulerAngles
    angles2: EulerAngles
    initial_state: QutritState = field(default_factory=lambda: QutritState.basis(Outcome.C))

    def __post_init__(self):
        if abs(self.initial_state.norm2 - 1) > NORM_TOL:
            raise InvalidInputError("initial state must be normalized")

    @classmethod
    def from_angles(cls, angles, initial_state: QutritState | None = None) -> "EvolutionConfig":
        """Build from six angles ordered as ``ANGLE_NAMES``."""
        a = [float(x) for x in angles]
        if len(a) != 6:
            raise InvalidInputError("expected six angles")
        kwargs = {} if initial_state is None else {"initial_state": initial_state}
        return cls(EulerAngles(*a[:3]), EulerAngles(*a[3:]), **kwargs)

    def angles(self) -> tuple[float, ...]:
        return self.angles1.as_tuple() + self.angles2.as_tuple()

    def with_angle(self, name: str, value: float) -> "EvolutionConfig":
        if name not in ANGLE_NAMES:
            raise InvalidInputError(f"unknown angle {name!r}; expected one of {ANGLE_NAMES}")
        a = list(self.angles())
        a[ANGLE_NAMES.index(name)] = float(value)
        return replace(self, angles1=EulerAngles(*a[:3]), angles2=EulerAngles(*a[3:]))

    def u21(self) -> np.ndarray:
        return build_unitary(self.angles1)

    def u32(self) -> np.ndarray:
        return build_unitary(self.angles2)


@dataclass(frozen=True)
class DichotomicMap:
    """Assignment of +1/-1 to each outcome; default q(A) = -q(B) = q(C) = 1."""

    qa: int = 1
    qb: int = -1
    qc: int = 1

    def __post_init__(self):
        if any(v not in (1, -1) for v in (self.qa, self.qb, self.qc)):
            raise InvalidInputError("dichotomic values must be +1 or -1")

    def __call__(self, outcome: Outcome) -> int:
        return self.values()[int(outcome)]

    def values(self) -> np.ndarray:
        return np.array([self.qa, self.qb, self.qc], dtype=float)


class TableKind(Enum):
    UNAMBIGUOUS = "unambiguous-joint"
    AMBIGUOUS = "ambiguous-joint"
    QUASI = "inferred-quasi"


@dataclass(frozen=True)
class ProbabilityTable:
    kind: TableKind
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (3, 3):
            raise InvalidInputError(f"table must be 3x3, got shape {e.shape}")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def __getitem__(self, key) -> float:
        n3, second = key
        return float(self.entries[int(n3), int(second)])


@dataclass(frozen=True)
class LgiReport:
    marginals: np.ndarray
    joint_u: ProbabilityTable
    joint_a: ProbabilityTable
    quasi: ProbabilityTable
    q2_mean: float
    q3q2_mean: float
    q3_mean: float
    K: float
    delta: np.ndarray
    Delta: float
    q2_mean_a: float
    q3q2_mean_a: float
    K_A: float
    delta_a: np.ndarray
    Delta_A: float

    @property
    def violation(self) -> float:
        """K_A - (1 + Delta_A); positive means the ambiguous modified LGI is violated."""
        return self.K_A - 1.0 - self.Delta_A

    @property
    def violation_unambiguous(self) -> float:
        return self.K - 1.0 - self.Delta


def _branches(cfg: EvolutionConfig) -> tuple[QutritState, np.ndarray]:
    return evolve(cfg.initial_state, cfg.u21()), cfg.u32()


def marginal_distribution(cfg: EvolutionConfig) -> np.ndarray:
    mid, u32 = _branches(cfg)
    return born_probs(evolve(mid, u32))


def joint_unambiguous(cfg: EvolutionConfig) -> ProbabilityTable:
    mid, u32 = _branches(cfg)
    cols = [born_probs(evolve(project(mid, n)[1], u32)) for n in Outcome]
    return ProbabilityTable(TableKind.UNAMBIGUOUS, np.column_stack(cols))


def joint_ambiguous(cfg: EvolutionConfig) -> ProbabilityTable:
    mid, u32 = _branches(cfg)
    cols = [born_probs(evolve(block(mid, n)[1], u32)) for n in Outcome]
    return ProbabilityTable(TableKind.AMBIGUOUS, np.column_stack(cols))


def infer_quasiprobabilities(table: ProbabilityTable) -> ProbabilityTable:
    """P'(n3, n) = 1/2 P(n3, n u m) + 1/2 P(n3, n u l) - 1/2 P(n3, m u l), {n, m, l} = {A, B, C}."""
    if table.kind is not TableKind.AMBIGUOUS:
        raise InvalidInputError(f"quasi-probabilities need an ambiguous table, got {table.kind.value}")
    t = table.entries
    out = np.empty((3, 3))
    for n in range(3):
        m, l = (n + 1) % 3, (n + 2) % 3
        # column index = blocked mode, so "n u m" is the column that blocks l
        out[:, n] = 0.5 * t[:, l] + 0.5 * t[:, m] - 0.5 * t[:, n]
    return ProbabilityTable(TableKind.QUASI, out)


def _require_q_table(table: ProbabilityTable):
    if table.kind is TableKind.AMBIGUOUS:
        raise InvalidInputError("ambiguous outcomes carry no dichotomic value; infer quasi-probabilities first")


def correlators(
    table: ProbabilityTable, marginals, qmap: DichotomicMap = DichotomicMap()
) -> tuple[float, float, float, float]:
    """Return (<Q2>, <Q3 Q2>, <Q3>, K) with K = <Q2> + <Q3 Q2> - <Q3>."""
    _require_q_table(table)
    q = qmap.values()
    p = table.entries
    q2 = float(np.sum(p @ q))
    q3q2 = float(q @ p @ q)
    q3 = float(q @ np.asarray(marginals, dtype=float))
    return q2, q3q2, q3, q2 + q3q2 - q3


def signalling_deltas(marginals, table: ProbabilityTable) -> tuple[np.ndarray, float]:
    """delta(n3) = P(n3) - sum_n2 table(n3, n2) and Delta = sum |delta(n3)|."""
    _require_q_table(table)
    delta = np.asarray(marginals, dtype=float) - table.entries.sum(axis=1)
    return delta, float(np.sum(np.abs(delta)))


def report_from_tables(
    marginals, joint_u: ProbabilityTable, joint_a: ProbabilityTable, qmap: DichotomicMap = DichotomicMap()
) -> LgiReport:
    marginals = np.asarray(marginals, dtype=float)
    quasi = infer_quasiprobabilities(joint_a)
    q2, q3q2, q3, k = correlators(joint_u, marginals, qmap)
    q2a, q3q2a, _, ka = correlators(quasi, marginals, qmap)
    delta, big_delta = signalling_deltas(marginals, joint_u)
    delta_a, big_delta_a = signalling_deltas(marginals, quasi)
    return LgiReport(
        marginals=marginals,
        joint_u=joint_u,
        joint_a=joint_a,
        quasi=quasi,
        q2_mean=q2,
        q3q2_mean=q3q2,
        q3_mean=q3,
        K=k,
        delta=delta,
        Delta=big_delta,
        q2_mean_a=q2a,
        q3q2_mean_a=q3q2a,
        K_A=ka,
        delta_a=delta_a,
        Delta_A=big_delta_a,
    )


def lgi_report(cfg: EvolutionConfig, qmap: DichotomicMap = DichotomicMap()) -> LgiReport:
    return report_from_tables(
        marginal_distribution(cfg), joint_unambiguous(cfg), joint_ambiguous(cfg), qmap
    )


def _batch_rotation(i: int, j: int, angle: np.ndarray) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    r = np.zeros(angle.shape + (3, 3))
    r[..., :, :] = np.eye(3)
    r[..., i, i] = c
    r[..., j, j] = c
    r[..., i, j] = s
    r[..., j, i] = -s
    return r


def _batch_unitary(theta, chi, phi) -> np.ndarray:
    return _batch_rotation(1, 2, theta) @ _batch_rotation(0, 2, chi) @ _batch_rotation(0, 1, phi)


def evaluate_batch(angles, initial_state: QutritState | None = None, qmap: DichotomicMap = DichotomicMap()) -> dict:
    """Vectorised K, Delta, K_A, Delta_A (plus delta, delta_a, quasi) for an (N, 6) array of angles.

    Same arithmetic as :func:`lgi_report` without building per-config objects;
    used for grid scans.
    """
    a = np.atleast_2d(np.asarray(angles, dtype=float))
    if a.shape[-1] != 6:
        raise InvalidInputError("angles must have trailing dimension 6")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("angles must be finite")
    psi0 = (initial_state or QutritState.basis(Outcome.C)).vector
    u1 = _batch_unitary(a[:, 0], a[:, 1], a[:, 2])
    u2 = _batch_unitary(a[:, 3], a[:, 4], a[:, 5])
    mid = u1 @ psi0  # (N, 3)
    final = np.einsum("nij,nj->ni", u2, mid)
    marg = np.abs(final) ** 2
    # pass-only-n2 branch reaching n3: U2[n3, n2] * mid[n2]
    branch = u2 * mid[:, None, :]
    joint_u = np.abs(branch) ** 2
    joint_a = np.abs(final[:, :, None] - branch) ** 2
    quasi = 0.5 * joint_a.sum(axis=2, keepdims=True) - joint_a
    q = qmap.values()

    def k_of(t):
        return np.einsum("nij,j->n", t, q) + np.einsum("i,nij,j->n", q, t, q) - marg @ q

    delta = marg - joint_u.sum(axis=2)
    delta_a = marg - quasi.sum(axis=2)
    return {
        "K": k_of(joint_u),
        "Delta": np.abs(delta).sum(axis=1),
        "K_A": k_of(quasi),
        "Delta_A": np.abs(delta_a).sum(axis=1),
        "delta": delta,
        "delta_a": delta_a,
        "quasi": quasi,
    }


def report_record(report: LgiReport) -> dict[str, float]:
    """Flat scalar view of a report with stable key names (CSV/JSON columns)."""
    rec: dict[str, float] = {}
    for o in Outcome:
        rec[f"p3_{o.name}"] = float(report.marginals[o])
    rec.update(
        q2_mean=report.q2_mean,
        q3q2_mean=report.q3q2_mean,
        q3_mean=report.q3_mean,
        K=report.K,
        Delta=report.Delta,
        q2_mean_amb=report.q2_mean_a,
        q3q2_mean_amb=report.q3q2_mean_a,
        K_amb=report.K_A,
        Delta_amb=report.Delta_A,
    )
    for o in Outcome:
        rec[f"delta_{o.name}"] = float(report.delta[o])
    for o in Outcome:
        rec[f"deltaA_{o.name}"] = float(report.delta_a[o])
    for n3 in Outcome:
        for n2 in Outcome:
            rec[f"qp_{n3.name}{n2.name}"] = report.quasi[n3, n2]
    return rec
