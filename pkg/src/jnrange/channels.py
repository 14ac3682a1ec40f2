"""Quantum maps given by Kraus operators, Phi(A) = sum_i X_i A X_i*."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, HypothesisError
from .jnr import jnr_sample, jnr_support_many, random_directions
from .linalg import HermitianTuple, _square, as_matrix, matrix_from_json, matrix_to_json
from .rng import as_generator
from .states import as_state, haar_unitary

DEFECT_TOL = 1e-10
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


class KrausChannel:
    """Channel with Kraus operators ``X_i``.

    ``mixture`` optionally records a mixed-unitary form ``X_i = sqrt(w_i) U_i``.
    When present, ``apply`` evaluates ``sum_i w_i U_i A U_i*`` directly, which
    keeps dyadic inputs exact instead of routing the weights through ``sqrt``.
    """

    def __init__(self, kraus, mixture=None):
        ops = [as_matrix(x) for x in kraus]
        if not ops:
            raise DimensionError("a channel needs at least one Kraus operator")
        n = ops[0].shape[0]
        for x in ops:
            if x.shape != (n, n):
                raise DimensionError("Kraus operators must all be N x N")
        self.kraus = np.stack(ops)
        self.kraus.setflags(write=False)
        self.mixture = None
        if mixture is not None:
            w = np.asarray([wi for wi, _ in mixture], dtype=np.float64)
            u = np.stack([as_matrix(ui) for _, ui in mixture])
            if u.shape != self.kraus.shape or not np.allclose(np.sqrt(w)[:, None, None] * u, self.kraus, atol=1e-12):
                raise ValueError("mixture does not match the Kraus operators")
            self.mixture = (w, u)

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    @property
    def k(self) -> int:
        return self.kraus.shape[0]

    def __repr__(self):
        return f"KrausChannel(k={self.k}, dim={self.dim})"

    def __call__(self, a):
        return apply(self, a)

    def to_json(self) -> dict:
        return {"dim": self.dim, "kraus": [matrix_to_json(x) for x in self.kraus]}

    @classmethod
    def from_json(cls, obj) -> "KrausChannel":
        ch = cls([matrix_from_json(m) for m in obj["kraus"]])
        if "dim" in obj and int(obj["dim"]) != ch.dim:
            raise DimensionError(f"declared dim {obj['dim']} != operator size {ch.dim}")
        return ch


def apply(channel: KrausChannel, a) -> np.ndarray:
    a = _square(a)
    if a.shape[0] != channel.dim:
        raise DimensionError(f"{a.shape[0]}x{a.shape[0]} input for a channel on dimension {channel.dim}")
    if channel.mixture is not None:
        w, u = channel.mixture
        return np.einsum("k,kij,jl,kml->im", w, u, a, u.conj())
    x = channel.kraus
    return np.einsum("kij,jl,kml->im", x, a, x.conj())


def iterate(channel: KrausChannel, a, times: int) -> list[np.ndarray]:
    """[a, Phi(a), ..., Phi^times(a)]."""
    out = [_square(a)]
    for _ in range(times):
        out.append(apply(channel, out[-1]))
    return out


def apply_tuple(channel: KrausChannel, tuple_: HermitianTuple) -> HermitianTuple:
    # Phi preserves Hermiticity; symmetrize away roundoff before the strict check
    imgs = [apply(channel, a) for a in tuple_.operators]
    return HermitianTuple([(m + m.conj().T) / 2 for m in imgs])


def adjoint_channel(channel: KrausChannel) -> KrausChannel:
    if channel.mixture is not None:
        w, u = channel.mixture
        return _mixed_unitary([(wi, ui.conj().T) for wi, ui in zip(w, u)])
    return KrausChannel(np.conj(np.swapaxes(channel.kraus, 1, 2)))


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """Kraus operators of second o first: all products Y_j X_i."""
    if second.dim != first.dim:
        raise DimensionError("channels act on different dimensions")
    if second.mixture is not None and first.mixture is not None:
        return _mixed_unitary([
            (wy * wx, y @ x) for wy, y in zip(*second.mixture) for wx, x in zip(*first.mixture)
        ])
    return KrausChannel([y @ x for y in second.kraus for x in first.kraus])


@dataclass(frozen=True)
class ChannelReport:
    is_unital: bool
    is_trace_preserving: bool
    unital_defect: float
    tp_defect: float

    def to_json(self) -> dict:
        return {
            "is_unital": self.is_unital,
            "is_trace_preserving": self.is_trace_preserving,
            "unital_defect": self.unital_defect,
            "tp_defect": self.tp_defect,
        }


def analyze(channel: KrausChannel) -> ChannelReport:
    x = channel.kraus
    eye = np.eye(channel.dim)
    unital = float(np.max(np.abs(np.einsum("kij,klj->il", x, x.conj()) - eye)))
    tp = float(np.max(np.abs(np.einsum("kji,kjl->il", x.conj(), x) - eye)))
    return ChannelReport(unital <= DEFECT_TOL, tp <= DEFECT_TOL, unital, tp)


@dataclass(frozen=True)
class PureDecomposition:
    weights: np.ndarray
    states: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.weights, self.states, self.states.conj())


def decompose_pure(channel: KrausChannel, psi, cutoff: float = 1e-14) -> PureDecomposition:
    """Phi(|psi><psi|) = sum_i p_i |psi_i><psi_i| with psi_i = X_i psi / |X_i psi|."""
    psi = as_state(psi)
    if psi.size != channel.dim:
        raise DimensionError("state and channel dimensions differ")
    imgs = channel.kraus @ psi
    norms = np.linalg.norm(imgs, axis=1)
    keep = norms > cutoff
    if not keep.any():
        raise ValueError("every Kraus operator annihilates psi")
    return PureDecomposition(norms[keep] ** 2, imgs[keep] / norms[keep, None])


# -- named channels -----------------------------------------------------------

def _open_unit(name, p):
    if not 0 < p < 1:
        raise ValueError(f"{name}: p must lie in (0, 1), got {p}")


def _mixed_unitary(terms) -> KrausChannel:
    return KrausChannel([np.sqrt(w) * u for w, u in terms], mixture=terms)


def decaying(p: float) -> KrausChannel:
    _open_unit("decaying", p)
    x1 = np.diag([1.0, np.sqrt(1 - p)]).astype(complex)
    x2 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel([x1, x2])


def phase_flip(p: float) -> KrausChannel:
    _open_unit("phase_flip", p)
    return _mixed_unitary([(1 - p, np.eye(2, dtype=complex)), (p, SIGMA_1)])


def double_flip(p: float, q: float) -> KrausChannel:
    if p < 0 or q < 0 or p + q > 1:
        raise ValueError(f"double_flip needs p, q >= 0 and p + q <= 1, got ({p}, {q})")
    flip12 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    flip23 = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    return _mixed_unitary([(1 - p - q, np.eye(3, dtype=complex)), (p, flip12), (q, flip23)])


def swap_conjugation() -> KrausChannel:
    return _mixed_unitary([(1.0, SWAP)])


BUILTINS = {
    "decaying": (decaying, 1),
    "phase_flip": (phase_flip, 1),
    "double_flip": (double_flip, 2),
    "swap_conjugation": (swap_conjugation, 0),
}


def builtin(name: str, *params: float) -> KrausChannel:
    try:
        factory, nparams = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown channel {name!r}; choose from {sorted(BUILTINS)}") from None
    if len(params) != nparams:
        raise ValueError(f"{name} takes {nparams} parameter(s), got {len(params)}")
    return factory(*params)


def parse_builtin(spec: str) -> KrausChannel:
    """'phase_flip:0.25', 'double_flip:0.5,0.4', 'swap_conjugation'."""
    name, _, rest = spec.partition(":")
    params = [float(v) for v in rest.split(",") if v.strip()] if rest else []
    return builtin(name.strip(), *params)


def load_channel(path) -> KrausChannel:
    with open(path) as fh:
        return KrausChannel.from_json(json.load(fh))


# -- random channels ----------------------------------------------------------

def random_isometry_blocks(dim: int, k: int, rng=None) -> np.ndarray:
    """Blocks V_i of the first block column of a Haar unitary on C^(dim k).

    sum_i V_i* V_i = I by unitarity.
    """
    u = haar_unitary(dim * k, as_generator(rng))
    return u[:, :dim].reshape(k, dim, dim)


def random_unital_channel(dim: int, k: int, rng=None) -> KrausChannel:
    """X_i = V_i*, so sum_i X_i X_i* = sum_i V_i* V_i = I."""
    v = random_isometry_blocks(dim, k, rng)
    return KrausChannel(np.conj(np.swapaxes(v, 1, 2)))


def random_tp_channel(dim: int, k: int, rng=None) -> KrausChannel:
    return KrausChannel(random_isometry_blocks(dim, k, rng))


# -- inclusion verifier -------------------------------------------------------

@dataclass
class InclusionReport:
    max_violation: float
    directions_checked: int
    samples_checked: int
    violations: int
    hypothesis_defects: dict
    tol: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        return {
            "max_violation": self.max_violation,
            "directions_checked": self.directions_checked,
            "samples_checked": self.samples_checked,
            "violations": self.violations,
            "hypothesis_defects": self.hypothesis_defects,
            "passed": self.passed,
        }


def verify_inclusion(channel: KrausChannel, target, directions: int = 256, samples: int = 2000,
                     rng=None, tol: float = 1e-8) -> InclusionReport:
    """Check W(Phi(A_1), ..., Phi(A_m)) inside conv W(A_1, ..., A_m).

    ``target`` is a HermitianTuple or a complex square matrix (taken as its
    pair of Hermitian parts). Two checks: the image support function is
    dominated by the source one in every tested direction, and sampled image
    points satisfy every source half-space. For m <= 2 the source range is
    convex, so this is the exact inclusion; for m > 2 it is the hull form.

    Raises
    ------
    HypothesisError
        The Kraus operators do not resolve the identity (not unital).
    """
    report = analyze(channel)
    defects = {"unital_defect": report.unital_defect, "tp_defect": report.tp_defect}
    if not report.is_unital:
        raise HypothesisError(f"channel is not unital (defect {report.unital_defect:.3g})")
    src = target if isinstance(target, HermitianTuple) else HermitianTuple.from_complex(target)
    if src.dim != channel.dim:
        raise DimensionError("channel and operators act on different dimensions")
    img = apply_tuple(channel, src)
    rng = as_generator(rng)

    u = random_directions(src.m, directions, rng.substream(0))
    if src.m == 2:
        t = 2 * np.pi * np.arange(directions) / directions
        u = np.vstack([u, np.column_stack([np.cos(t), np.sin(t)])])
    elif src.m == 1:
        u = np.array([[1.0], [-1.0]])
    h_src = jnr_support_many(src, u)
    h_img = jnr_support_many(img, u)
    gaps = h_img - h_src

    checked = 0
    if samples > 0:
        pts = jnr_sample(img, samples, rng.substream(1))
        gaps = np.concatenate([gaps, (pts @ u.T - h_src[None, :]).max(axis=1)])
        checked = samples
    return InclusionReport(
        max_violation=float(gaps.max()),
        directions_checked=len(u),
        samples_checked=checked,
        violations=int(np.sum(gaps > tol)),
        hypothesis_defects=defects,
        tol=tol,
    )
