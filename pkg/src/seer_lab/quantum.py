"""Explicit quantum realizations, their Born-rule values and optimality certificates.

Contents: the odd-n star-polygon (KCBS-style) construction and its
sum-of-nonnegative-operators certificate; the transitivity-of-implication
chain on the pentagram with the Clifton eight-ray coloring argument; the
trine-observable two-wing construction with its sum-of-squares certificate;
the Hardy-chain construction; relative-state inference chains; the rotated
odd-cycle game observables; and the two-time (diachronic) protocol.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numkit, scenario as scenario_mod
from .classical import c_function
from .numkit import ID2, born_probability, projector, spin_observable
from .tolerances import NUM_TOL, STRUCT_TOL

BELL_STATE = np.zeros(4, dtype=complex)
BELL_STATE[0] = BELL_STATE[3] = 1 / math.sqrt(2)


class CertificateError(RuntimeError):
    """An operator identity or spectral bound failed its tolerance."""


# --------------------------------------------------------------------------
# Star polygons and the cycle contextuality values


@dataclass(frozen=True)
class StarPolygon:
    """Cyclically ordered unit vectors in R^3 with adjacent members orthogonal.

    The a-th ray has polar angle theta with cos^2(theta) =
    cos(pi/n)/(1+cos(pi/n)) and azimuth (n-1)*pi*a/n, tracing an
    {n/((n-1)/2)} star polygon around the z axis.
    """

    n: int
    theta: float
    phis: tuple[float, ...]
    kets: tuple[np.ndarray, ...]


def star_polygon(n: int) -> StarPolygon:
    if n < 3 or n % 2 == 0:
        raise ValueError("star polygons are defined here for odd n >= 3")
    cos2 = math.cos(math.pi / n) / (1 + math.cos(math.pi / n))
    theta = math.acos(math.sqrt(cos2))
    st, ct = math.sin(theta), math.cos(theta)
    phis = tuple((n - 1) * math.pi * a / n for a in range(1, n + 1))
    kets = tuple(
        np.array([st * math.cos(phi), st * math.sin(phi), ct]) for phi in phis
    )
    for a in range(n):
        if abs(kets[a] @ kets[(a + 1) % n]) > STRUCT_TOL:
            raise AssertionError("adjacent rays failed orthogonality")
    return StarPolygon(n, theta, phis, kets)


def symmetry_axis_state(poly: StarPolygon) -> np.ndarray:
    """The state along the polygon's symmetry axis (equal overlap with every ray)."""
    return np.array([0.0, 0.0, 1.0])


def _require_commuting(p: np.ndarray, q: np.ndarray) -> None:
    if np.max(np.abs(p @ q - q @ p)) > STRUCT_TOL:
        raise AssertionError("projectors do not commute; no joint measurement")


def joint_pair_probs(
    state: np.ndarray, proj_a: np.ndarray, proj_b: np.ndarray
) -> dict[tuple[int, int], float]:
    """Outcome distribution of the four-effect joint measurement of two
    commuting projectors, with outcome 1 meaning "projector fires"."""
    _require_commuting(proj_a, proj_b)
    eye = np.eye(proj_a.shape[0])
    effects = {
        (1, 1): proj_a @ proj_b,
        (1, 0): proj_a @ (eye - proj_b),
        (0, 1): (eye - proj_a) @ proj_b,
        (0, 0): (eye - proj_a) @ (eye - proj_b),
    }
    return {xy: born_probability(state, eff) for xy, eff in effects.items()}


@dataclass(frozen=True)
class KlyachkoValue:
    n: int
    r: float
    s: float
    per_pair_anticorrelation: float


def klyachko_value(n: int) -> KlyachkoValue:
    """Born-rule anti-correlation value of the star-polygon construction.

    Returns R (average anti-correlation probability over adjacent pairs) and
    S = n - 2nR; both match the closed forms 2cos(pi/n)/(1+cos(pi/n)) and
    n - 4n cos(pi/n)/(1+cos(pi/n))."""
    if n == 3:
        raise ValueError(
            "n=3 has no quantum advantage: three pairwise commuting projectors "
            "are all three jointly diagonalizable"
        )
    poly = star_polygon(n)
    psi = symmetry_axis_state(poly)
    projs = [projector(k) for k in poly.kets]
    antis = []
    for a in range(n):
        dist = joint_pair_probs(psi, projs[a], projs[(a + 1) % n])
        antis.append(dist[(0, 1)] + dist[(1, 0)])
    r = float(np.mean(antis))
    if max(abs(x - r) for x in antis) > NUM_TOL:
        raise AssertionError("pair statistics are not symmetric")
    return KlyachkoValue(n, r, n - 2 * n * r, r)


def klyachko_closed_form(n: int) -> tuple[float, float]:
    c = math.cos(math.pi / n)
    r = 2 * c / (1 + c)
    return r, n - 4 * n * c / (1 + c)


def klyachko_table(n: int) -> scenario_mod.CorrelationTable:
    """Adjacent-pair outcome statistics of the star-polygon state as a table."""
    poly = star_polygon(n)
    psi = symmetry_axis_state(poly)
    projs = [projector(k) for k in poly.kets]
    scen = scenario_mod.Scenario(n, tuple((a, a % n + 1) for a in range(1, n + 1)))
    probs = {}
    for a in range(1, n + 1):
        ctx = tuple(sorted((a, a % n + 1)))
        first, second = ctx
        dist = joint_pair_probs(psi, projs[first - 1], projs[second - 1])
        probs[ctx] = {xy: p for xy, p in dist.items() if p > 1e-15}
    return scenario_mod.CorrelationTable(scen, probs)


def seer_game_win_probability(n: int) -> float:
    """Chance that an adjacent pair of the star-polygon construction is found
    both-empty, i.e. the suitor's both-0 prediction succeeds."""
    poly = star_polygon(n)
    psi = symmetry_axis_state(poly)
    projs = [projector(k) for k in poly.kets]
    dist = joint_pair_probs(psi, projs[0], projs[1])
    return dist[(0, 0)]


# --------------------------------------------------------------------------
# Certificate for the cycle (KCBS-style) inequality


@dataclass(frozen=True)
class SosCertificateReport:
    n: int
    residual: float
    certified_bound: float
    extremal_eigenvalue: float
    min_coefficient: float
    ok: bool


def _cycle_operator(xbars: Sequence[np.ndarray]) -> np.ndarray:
    n = len(xbars)
    return sum(xbars[a] @ xbars[(a + 1) % n] for a in range(n))


def klyachko_decomposition_residual(xbars: Sequence[np.ndarray]) -> float:
    """Frobenius residual of the sum-of-nonnegative-terms identity for the
    cycle operator, valid for any Hermitian family with adjacent members
    commuting (no dichotomy assumption)."""
    n = len(xbars)
    d = xbars[0].shape[0]
    eye = np.eye(d, dtype=complex)
    sec = 1 / math.cos(math.pi / n)
    cos = math.cos(math.pi / n)
    bound = n * (1 - 4 * cos / (1 + cos))
    lhs = _cycle_operator(xbars) - bound * eye

    rhs = np.zeros((d, d), dtype=complex)
    rhs += 0.25 * (2 - sec) * sum(eye - xb @ xb for xb in xbars)
    rhs += 0.25 * sum(
        eye - np.linalg.matrix_power(xbars[a] @ xbars[(a + 1) % n], 2) for a in range(n)
    )
    rhs += (
        0.25
        * sec
        * sum(
            xbars[a] @ xbars[(a + 2) % n] @ (eye - xbars[(a + 1) % n] @ xbars[(a + 1) % n])
            for a in range(n)
        )
    )
    v0 = n * (3 - 2 / math.cos(math.pi / (2 * n)) ** 2) * eye + _cycle_operator(xbars)
    rhs += (1 + sec) / (4 * n) * (v0.conj().T @ v0)
    omega = np.exp(-2j * math.pi / n)
    lam1, lam2 = klyachko_certificate_coefficients(n)
    for j in range(1, n + 1):
        v1 = sum(omega ** (j * a) * xbars[a - 1] for a in range(1, n + 1))
        rhs += lam1[j - 1] / n * (v1.conj().T @ v1)
    for j in range(1, n):
        v2 = sum(omega ** (j * a) * xbars[a - 1] @ xbars[a % n] for a in range(1, n + 1))
        rhs += lam2[j - 1] / n * (v2.conj().T @ v2)
    return float(np.linalg.norm(lhs - rhs))


def klyachko_certificate_coefficients(n: int) -> tuple[list[float], list[float]]:
    sec = 1 / math.cos(math.pi / n)
    lam1 = [
        (1 + math.cos(2 * math.pi * j / n) * sec) * math.sin(math.pi * j / n) ** 2
        for j in range(1, n + 1)
    ]
    lam2 = [0.25 * (1 + math.cos(2 * math.pi * j / n) * sec) for j in range(1, n)]
    return lam1, lam2


def sos_certificate_klyachko(n: int) -> SosCertificateReport:
    """Verify the spectral lower bound on the cycle operator built from the
    star-polygon projectors: identity residual, coefficient nonnegativity,
    and attainment of the certified minimum eigenvalue."""
    if n < 5 or n % 2 == 0:
        raise ValueError("the certificate applies to odd n >= 5")
    poly = star_polygon(n)
    xbars = [2 * projector(k) - np.eye(3) for k in poly.kets]
    residual = klyachko_decomposition_residual(xbars)
    lam1, lam2 = klyachko_certificate_coefficients(n)
    min_coeff = min(min(lam1), min(lam2))
    cos = math.cos(math.pi / n)
    bound = n * (1 - 4 * cos / (1 + cos))
    extremum = numkit.eig_extrema(_cycle_operator(xbars)).min_eigenvalue
    ok = (
        residual < NUM_TOL
        and min_coeff >= -STRUCT_TOL
        and extremum >= bound - NUM_TOL
        and abs(extremum - bound) < NUM_TOL
    )
    if not ok:
        raise CertificateError(
            f"cycle certificate failed at n={n}: residual={residual:.3e}, "
            f"min coefficient={min_coeff:.3e}, extremum={extremum!r} vs bound={bound!r}"
        )
    return SosCertificateReport(n, residual, bound, extremum, min_coeff, ok)


# --------------------------------------------------------------------------
# Transitivity of implication on the pentagram; Clifton's eight rays


@dataclass(frozen=True)
class TransitivityChainResult:
    psi2: np.ndarray
    p_start: float
    implications_hold: bool


def intersection_ray(
    plane_a: tuple[np.ndarray, np.ndarray], plane_b: tuple[np.ndarray, np.ndarray]
) -> np.ndarray:
    """Unit vector spanning the intersection of two 2-planes in R^3."""
    n1 = np.cross(plane_a[0], plane_a[1])
    n2 = np.cross(plane_b[0], plane_b[1])
    ray = np.cross(n1, n2)
    norm = np.linalg.norm(ray)
    if norm < 1e-12:
        raise ValueError("planes are degenerate; no unique intersection ray")
    return ray / norm


def transitivity_chain_klyachko() -> TransitivityChainResult:
    """State supporting the pentagram implication chain with a nonzero start.

    psi2 spans the intersection of span{l2,l3} and span{l4,l5}; on it the two
    state-dependent inferences (X2=0 => X3=1 and X4=0 => X5=1) hold with
    certainty, while p(X1=1) = 1 - 2/sqrt(5) > 0 starts the chain.
    """
    poly = star_polygon(5)
    k = poly.kets
    psi2 = intersection_ray((k[1], k[2]), (k[3], k[4]))
    if k[0] @ psi2 < 0:
        psi2 = -psi2
    projs = [projector(v) for v in k]
    holds = True
    for a, b in ((1, 2), (3, 4)):  # zero-based: pairs (l2,l3) and (l4,l5)
        dist = joint_pair_probs(psi2, projs[a], projs[b])
        p_cond = dist[(0, 1)] / (dist[(0, 1)] + dist[(0, 0)])
        holds = holds and abs(p_cond - 1.0) < 1e-10
    p_start = float((k[0] @ psi2) ** 2)
    return TransitivityChainResult(psi2, p_start, holds)


def heptagon_chain_rank() -> int:
    """Rank of the stacked plane normals for the n=7 analogue (3 means no
    common ray, so the chain construction has no state there)."""
    k = star_polygon(7).kets
    normals = np.vstack(
        [np.cross(k[1], k[2]), np.cross(k[3], k[4]), np.cross(k[5], k[6])]
    )
    return int(np.linalg.matrix_rank(normals, tol=1e-10))


@dataclass(frozen=True)
class CliftonReport:
    ray_names: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    triples: tuple[tuple[str, str, str], ...]
    n_valid_colorings: int
    n_colorings_start_and_psi2: int
    n_colorings_l1_zero: int


def clifton_check() -> CliftonReport:
    """Exhaustive 0/1 coloring of the eight-ray orthogonality graph.

    Rays: the five pentagram rays, the two plane normals chi (of span{l2,l3})
    and chi' (of span{l4,l5}), and psi2.  Valid colorings put exactly one 1 in
    each orthogonal triple and at most one 1 on each edge; none has both
    v(psi2)=1 and v(l1)=1.
    """
    poly = star_polygon(5)
    k = list(poly.kets)
    chi = np.cross(k[1], k[2])
    chi /= np.linalg.norm(chi)
    chip = np.cross(k[3], k[4])
    chip /= np.linalg.norm(chip)
    psi2 = intersection_ray((k[1], k[2]), (k[3], k[4]))
    if k[0] @ psi2 < 0:
        psi2 = -psi2
    rays = k + [chi, chip, psi2]
    names = ("l1", "l2", "l3", "l4", "l5", "chi", "chi'", "psi2")
    edges = tuple(
        (names[i], names[j])
        for i, j in itertools.combinations(range(8), 2)
        if abs(rays[i] @ rays[j]) < 1e-10
    )
    edge_idx = [
        (names.index(a), names.index(b)) for a, b in edges
    ]
    triples = tuple(
        (names[i], names[j], names[k_])
        for i, j, k_ in itertools.combinations(range(8), 3)
        if all(
            abs(rays[x] @ rays[y]) < 1e-10
            for x, y in itertools.combinations((i, j, k_), 2)
        )
    )
    triple_idx = [tuple(names.index(x) for x in t) for t in triples]
    valid = []
    for bits in itertools.product((0, 1), repeat=8):
        if any(bits[i] + bits[j] > 1 for i, j in edge_idx):
            continue
        if any(bits[i] + bits[j] + bits[k_] != 1 for i, j, k_ in triple_idx):
            continue
        valid.append(bits)
    i_l1, i_psi2 = names.index("l1"), names.index("psi2")
    return CliftonReport(
        names,
        edges,
        triples,
        len(valid),
        sum(1 for b in valid if b[i_l1] == 1 and b[i_psi2] == 1),
        sum(1 for b in valid if b[i_l1] == 0),
    )


# --------------------------------------------------------------------------
# Two-wing ring game: trine-style observables on a maximally entangled pair


def ring_observables(n: int) -> list[np.ndarray]:
    """The +-1 observables cos(phi_a) sigma_z + sin(phi_a) sigma_x with
    phi_a = (n-1) pi (a-1)/n, for a = 1..n."""
    if n < 3 or n % 2 == 0:
        raise ValueError("the ring construction needs odd n >= 3")
    return [spin_observable((n - 1) * math.pi * (a - 1) / n) for a in range(1, n + 1)]


def _pair_distribution(op_a: np.ndarray, op_b: np.ndarray) -> dict[tuple[int, int], float]:
    """Joint outcome distribution (outcome 0 <-> +1 eigenvalue) on the
    maximally entangled two-qubit state."""
    pa = [(ID2 + s * op_a) / 2 for s in (1, -1)]
    pb = [(ID2 + s * op_b) / 2 for s in (1, -1)]
    return {
        (i, j): born_probability(BELL_STATE, numkit.tensor(pa[i], pb[j]))
        for i in (0, 1)
        for j in (0, 1)
    }


def mermin_value(n: int) -> float:
    """Born-rule value of the two-wing ring game with trine-style observables;
    equals 1/3 + (2/3) cos^2(pi/2n)."""
    ops = ring_observables(n)
    total = 0.0
    w = 1.0 / (3 * n)
    for a in range(1, n + 1):
        nxt = a % n + 1
        dist_same = _pair_distribution(ops[a - 1], ops[a - 1])
        total += w * (dist_same[(0, 0)] + dist_same[(1, 1)])
        for pair in ((a, nxt), (nxt, a)):
            dist = _pair_distribution(ops[pair[0] - 1], ops[pair[1] - 1])
            total += w * (dist[(0, 1)] + dist[(1, 0)])
    return total


def mermin_closed_form(n: int) -> float:
    return 1 / 3 + 2 / 3 * math.cos(math.pi / (2 * n)) ** 2


def mermin_table(n: int) -> scenario_mod.CorrelationTable:
    """Bipartite correlation table of the ring construction (constrained cells only)."""
    ops = ring_observables(n)
    contexts = []
    probs = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if not (b == a or b == a % n + 1 or a == b % n + 1):
                continue
            ctx = (a, n + b)
            contexts.append(ctx)
            probs[ctx] = _pair_distribution(ops[a - 1], ops[b - 1])
    scen = scenario_mod.Scenario(2 * n, tuple(contexts), wing_split=n)
    return scenario_mod.CorrelationTable(scen, probs)


def bell_ring_operator(n: int) -> np.ndarray:
    """The two-wing operator whose spectrum bounds the ring-game value."""
    ops = ring_observables(n)
    abar = [numkit.tensor(op, ID2) for op in ops]
    bbar = [numkit.tensor(ID2, op) for op in ops]
    out = sum(abar[a] @ bbar[a] for a in range(n))
    out -= sum(abar[a - 1] @ bbar[a % n] for a in range(1, n + 1))  # b = a+1 (1-based)
    out -= sum(abar[b % n] @ bbar[b - 1] for b in range(1, n + 1))  # a = b+1
    return out


def bell_decomposition_residual(
    ops_a: Sequence[np.ndarray], ops_b: Sequence[np.ndarray]
) -> float:
    """Frobenius residual of the sum-of-squares identity for the two-wing ring
    operator, valid for arbitrary Hermitian wing observables."""
    n = len(ops_a)
    da, db = ops_a[0].shape[0], ops_b[0].shape[0]
    abar = [numkit.tensor(op, np.eye(db)) for op in ops_a]
    bbar = [numkit.tensor(np.eye(da), op) for op in ops_b]
    d = da * db
    eye = np.eye(d, dtype=complex)
    bell_op = sum(abar[a] @ bbar[a] for a in range(n))
    bell_op -= sum(abar[a - 1] @ bbar[a % n] for a in range(1, n + 1))
    bell_op -= sum(abar[b % n] @ bbar[b - 1] for b in range(1, n + 1))
    lams = [1 - 2 * math.cos(2 * math.pi * a / n) for a in range(1, n + 1)]
    lam_star = max(lams)
    lhs = n * lam_star * eye - bell_op
    omega = np.exp(-2j * math.pi / n)
    rhs = np.zeros((d, d), dtype=complex)
    for a in range(1, n + 1):
        vm = sum(omega ** (a * k) * (abar[k - 1] - bbar[k - 1]) for k in range(1, n + 1))
        vp = sum(omega ** (a * k) * (abar[k - 1] + bbar[k - 1]) for k in range(1, n + 1))
        vm /= math.sqrt(2 * n)
        vp /= math.sqrt(2 * n)
        rhs += 0.5 * (
            (lam_star + lams[a - 1]) * (vm.conj().T @ vm)
            + (lam_star - lams[a - 1]) * (vp.conj().T @ vp)
        )
    rhs += 0.5 * lam_star * sum(eye - ab @ ab for ab in abar)
    rhs += 0.5 * lam_star * sum(eye - bb @ bb for bb in bbar)
    return float(np.linalg.norm(lhs - rhs))


def sos_certificate_bell(n: int) -> SosCertificateReport:
    """Verify the spectral upper bound n(4cos^2(pi/2n)-1) on the ring operator
    and its attainment by the trine-style realization."""
    if n < 3 or n % 2 == 0:
        raise ValueError("the certificate applies to odd n >= 3")
    ops = ring_observables(n)
    residual = bell_decomposition_residual(ops, ops)
    lams = [1 - 2 * math.cos(2 * math.pi * a / n) for a in range(1, n + 1)]
    lam_star = max(lams)
    closed = 4 * math.cos(math.pi / (2 * n)) ** 2 - 1
    bound = n * lam_star
    extremum = numkit.eig_extrema(bell_ring_operator(n)).max_eigenvalue
    min_coeff = min(min(lam_star + lam for lam in lams), min(lam_star - lam for lam in lams))
    ok = (
        residual < NUM_TOL
        and abs(lam_star - closed) < NUM_TOL
        and min_coeff >= -STRUCT_TOL
        and abs(extremum - bound) < NUM_TOL
    )
    if not ok:
        raise CertificateError(
            f"ring certificate failed at n={n}: residual={residual:.3e}, "
            f"extremum={extremum!r} vs bound={bound!r}"
        )
    return SosCertificateReport(n, residual, bound, extremum, min_coeff, ok)


# --------------------------------------------------------------------------
# Odd-cycle game


def odd_cycle_observables(n: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Wing observables for the odd-cycle game: Bob's Bloch directions are
    rotated by pi/2n in the z-x plane (a state-space rotation by pi/4n),
    which makes every context succeed with probability cos^2(pi/4n)."""
    if n < 3 or n % 2 == 0:
        raise ValueError("the odd-cycle game needs odd n >= 3")
    shift = math.pi / (2 * n)
    ops_a = ring_observables(n)
    ops_b = [
        spin_observable((n - 1) * math.pi * (b - 1) / n + shift) for b in range(1, n + 1)
    ]
    return ops_a, ops_b


def odd_cycle_game_value(n: int) -> float:
    """Born-rule winning probability of the odd-cycle game; equals cos^2(pi/4n)."""
    ops_a, ops_b = odd_cycle_observables(n)
    total = 0.0
    w = 1.0 / (2 * n)
    for a in range(1, n + 1):
        dist = _pair_distribution(ops_a[a - 1], ops_b[a - 1])
        total += w * (dist[(0, 0)] + dist[(1, 1)])
        dist = _pair_distribution(ops_a[a - 1], ops_b[a % n])
        total += w * (dist[(0, 1)] + dist[(1, 0)])
    return total


def odd_cycle_table(n: int) -> scenario_mod.CorrelationTable:
    ops_a, ops_b = odd_cycle_observables(n)
    contexts = []
    probs = {}
    for a in range(1, n + 1):
        for b in (a, a % n + 1):
            ctx = (a, n + b)
            contexts.append(ctx)
            probs[ctx] = _pair_distribution(ops_a[a - 1], ops_b[b - 1])
    scen = scenario_mod.Scenario(2 * n, tuple(contexts), wing_split=n)
    return scenario_mod.CorrelationTable(scen, probs)


# --------------------------------------------------------------------------
# Hardy chain construction


@dataclass(frozen=True)
class HardyConfig:
    eta: float
    kappas: tuple[float, float, float]
    state: np.ndarray
    up_a: tuple[np.ndarray, ...]
    up_b: tuple[np.ndarray, ...]


def build_hardy(eta: float) -> HardyConfig:
    """Two-qubit state (|00> - eta|11>)/sqrt(1+eta^2) plus the three measurement
    rays per wing, with kappa_a = eta^(((a+1) mod 3) + 1/2)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    k1, k2, k3 = (eta ** (((a + 1) % 3) + 0.5) for a in (1, 2, 3))

    def unit(x, y):
        v = np.array([x, y], dtype=complex)
        return v / np.linalg.norm(v)

    up_a = (unit(k1, 1), unit(1, -k2), unit(1, k3))
    up_b = (unit(-k3, 1), unit(k2, 1), unit(1, -k1))
    state = np.zeros(4, dtype=complex)
    state[0], state[3] = 1.0, -eta
    state /= np.linalg.norm(state)
    return HardyConfig(eta, (k1, k2, k3), state, up_a, up_b)


def hardy_chain_constraints(cfg: HardyConfig) -> dict[str, float]:
    """The five probabilities that must vanish for the implication chain
    A1=1 => B1=1 => not A2 ... => B3=1 to hold."""
    pa = [projector(v) for v in cfg.up_a]
    pb = [projector(v) for v in cfg.up_b]

    def joint(ea, eb):
        return born_probability(cfg.state, numkit.tensor(ea, eb))

    return {
        "p(A1=1,B1=0)": joint(pa[0], ID2 - pb[0]),
        "p(A2=1,B1=1)": joint(pa[1], pb[0]),
        "p(A2=0,B2=1)": joint(ID2 - pa[1], pb[1]),
        "p(A3=0,B2=0)": joint(ID2 - pa[2], ID2 - pb[1]),
        "p(A3=1,B3=0)": joint(pa[2], ID2 - pb[2]),
    }


def hardy_value(eta: float) -> float:
    """Probability of the chain-contradicting event A1=1 and B3=0.

    Transitivity along the chain would force B3=1 whenever A1=1; this returns
    the Born probability of the opposite, after asserting that every link of
    the chain holds (all five conditional constraints vanish).
    """
    cfg = build_hardy(eta)
    constraints = hardy_chain_constraints(cfg)
    worst = max(abs(v) for v in constraints.values())
    if worst > 1e-10:
        raise ValueError(
            f"chain constraints fail at eta={eta!r} (worst residual {worst:.3e})"
        )
    pa1 = projector(cfg.up_a[0])
    pb3 = projector(cfg.up_b[2])
    return born_probability(cfg.state, numkit.tensor(pa1, ID2 - pb3))


def hardy_closed_form_sqrt3() -> float:
    return 144 / (27 + math.sqrt(3)) ** 2


def golden_section_maximize(f, lo: float, hi: float, tol: float = 1e-8):
    """Golden-section search for a maximum of a unimodal function on [lo, hi]."""
    inv_phi = (math.sqrt(5) - 1) / 2
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
        else:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
    mid = (lo + hi) / 2
    return mid, f(mid)


def hardy_optimize(lo: float = 0.5, hi: float = 5.0, tol: float = 1e-8):
    """Maximize the chain-contradiction probability over the state parameter."""
    return golden_section_maximize(hardy_value, lo, hi, tol)


# --------------------------------------------------------------------------
# Relative-state inference chains


@dataclass(frozen=True)
class RelativeStateChainResult:
    overlap: float
    chain: tuple[np.ndarray, ...]
    p_initial: float


def relative_state_chain(
    rho: np.ndarray, u: np.ndarray, phi1: Sequence[complex], steps: int
) -> RelativeStateChainResult:
    """Iterate the relative-state map phi -> rho^T phi for `steps` rounds.

    For the bipartite state (1 x U sqrt(rho)) sum_k |k>|k>, finding phi on one
    side forces the relative state on the other, and chaining the inferences
    multiplies by rho^T each round.  The overlap |<phi1|phi^(N)>|^2 (with the
    chain state normalized) vanishes only if rho^T annihilates phi1, in which
    case the initial event itself has probability zero.
    """
    rho = numkit.as_matrix(rho)
    if not numkit.is_psd(rho) or abs(np.trace(rho).real - 1.0) > 1e-10:
        raise ValueError("rho must be positive semidefinite with unit trace")
    if not numkit.is_unitary(numkit.as_matrix(u)):
        raise ValueError("u must be unitary")
    if rho.shape != np.asarray(u).shape:
        raise ValueError("rho and u must act on the same space")
    if steps < 1:
        raise ValueError("need at least one step")
    phi = numkit.normalize(phi1)
    rho_t = rho.T
    p_initial = float(np.real(np.vdot(phi, rho_t @ phi)))
    chain = [phi]
    collapsed = False
    for _ in range(steps):
        nxt = rho_t @ chain[-1]
        norm = np.linalg.norm(nxt)
        if norm < 1e-13:
            collapsed = True
            break
        chain.append(nxt / norm)
    overlap = 0.0 if collapsed else float(abs(np.vdot(chain[0], chain[-1])) ** 2)
    if overlap < 1e-12 and p_initial > 1e-10:
        raise AssertionError(
            "chain denied its antecedent although the antecedent has support"
        )
    return RelativeStateChainResult(overlap, tuple(chain), p_initial)


def relative_state_partner(
    rho: np.ndarray, u: np.ndarray, phi: Sequence[complex]
) -> np.ndarray:
    """The state of the far wing after finding phi locally: U sqrt(rho) phi*."""
    vals, vecs = np.linalg.eigh(numkit.as_matrix(rho))
    sqrt_rho = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    partner = numkit.as_matrix(u) @ sqrt_rho @ np.conj(numkit.normalize(phi))
    norm = np.linalg.norm(partner)
    if norm < 1e-13:
        raise ValueError("phi has no support on the bipartite state")
    return partner / norm


def purification_state(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """(1 x U sqrt(rho)) sum_k |k>|k> as a d^2 vector (normalized)."""
    rho = numkit.as_matrix(rho)
    d = rho.shape[0]
    vals, vecs = np.linalg.eigh(rho)
    sqrt_rho = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    mat = numkit.as_matrix(u) @ sqrt_rho
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        psi += np.kron(np.eye(d)[k], mat[:, k])
    return psi


# --------------------------------------------------------------------------
# Two-time (diachronic) protocol


def trine_qubit_states() -> dict[tuple[int, int], np.ndarray]:
    """Eigenstates |phi_{t,b}> of the three trine observables; b=0 tags the
    +1 eigenvector."""
    out = {}
    for t in (1, 2, 3):
        op = spin_observable(2 * math.pi * (t - 1) / 3)
        vals, vecs = np.linalg.eigh(op)
        out[(t, 0)] = vecs[:, 1]  # eigenvalue +1
        out[(t, 1)] = vecs[:, 0]  # eigenvalue -1
    return out


def diachronic_success_probability(t: int, b: int, y: int) -> float:
    """Born probability that measuring observable y on |phi_{t,b}> returns the
    target bit c_y(t,b)."""
    states = trine_qubit_states()
    op = spin_observable(2 * math.pi * (y - 1) / 3)
    vals, vecs = np.linalg.eigh(op)
    proj0 = np.outer(vecs[:, 1], vecs[:, 1].conj())
    p0 = born_probability(states[(t, b)], proj0)
    target = c_function(y, t, b)
    return p0 if target == 0 else 1 - p0


@dataclass(frozen=True)
class DiachronicResult:
    r: float
    obliviousness_defect: float


def diachronic_quantum() -> DiachronicResult:
    """Average two-time success (5/6) and the trit-obliviousness defect.

    The defect is the largest trace distance between the unconditioned
    mixtures for different first-measurement choices; all three mixtures
    equal 1/2 identity, so it vanishes.
    """
    total = sum(
        diachronic_success_probability(t, b, y)
        for t in (1, 2, 3)
        for b in (0, 1)
        for y in (1, 2, 3)
    ) / 18
    states = trine_qubit_states()
    mixes = [
        0.5 * (projector(states[(t, 0)]) + projector(states[(t, 1)])) for t in (1, 2, 3)
    ]
    defect = 0.0
    for r1, r2 in itertools.combinations(mixes, 2):
        defect = max(defect, 0.5 * float(np.abs(np.linalg.eigvalsh(r1 - r2)).sum()))
    return DiachronicResult(total, defect)
