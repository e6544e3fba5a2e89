"""The six finite polynomial families and their contiguity data.

Each family is a finite sequence P_n(k, N), n = 0..N, normalized with a
(q-)binomial prefactor, satisfying a pair of contiguity relations in the
level N:

    P_n(k, N+1)      = alpha1(n, N) P_{n-1}(k, N) + alpha2(n, N) P_n(k, N)
    mu(k, N) P_n(k, N-1) = beta1(n, N) P_{n+1}(k, N) + beta2(n, N) P_n(k, N)

with the boundary convention P_{-1} = P_{N+1} = 0. The left-hand coefficient
mu(k, N) matches the lowering coefficient of an algebra acting on a tensor
product of two lowest-weight modules, which is what makes these families
Clebsch-Gordan coefficients; the mapping is

    Hahn, Krawtchouk -> oscillator      dual Hahn, Racah -> sl2
    q-Hahn           -> q-oscillator    q-Racah          -> U_q(sl2)

For the oscillator pair the second contiguity relation carries a global -1
(in mu, beta1 and beta2) so that mu(k, N) equals the oscillator lowering
coefficient -(N-k); this only rescales the lowering generator.

Constrained parameters are computed, never supplied: beta for dual Hahn
(alpha + beta = lambda1 + lambda2 - 2), gamma for Racah (lambda1 + lambda2
- 1) and for q-Racah (kappa1^2 kappa2^2 / q). Validation is eager and
exhaustive over the finite grid up to n_max, so a constructed instance is a
certificate that no denominator in the contiguity or coproduct coefficients
vanishes anywhere it is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

from .algebras import AlgebraKind, AlgebraTag, phi
from .exactmath import (InvalidParameterError, Scalar, as_scalar, binomial,
                        format_scalar, hyper_terminating, q_binomial,
                        q_hyper_terminating)
from .linalg import RatMat, nullspace, rank
from .report import CheckResult, Report

__all__ = [
    "FamilyKind", "FamilyInstance", "ContiguityData", "make_instance",
    "poly_value", "contiguity", "check_contiguity",
    "check_three_term_dual_hahn", "limit_hahn_to_krawtchouk",
    "limit_racah_to_dual_hahn", "random_instance", "algebra_for", "labels",
]


class FamilyKind(str, Enum):
    HAHN = "hahn"
    KRAWTCHOUK = "krawtchouk"
    DUAL_HAHN = "dual-hahn"
    RACAH = "racah"
    Q_HAHN = "q-hahn"
    Q_RACAH = "q-racah"

    @property
    def is_q(self) -> bool:
        return self in (FamilyKind.Q_HAHN, FamilyKind.Q_RACAH)


_ALGEBRA_OF = {
    FamilyKind.HAHN: AlgebraTag.OSC,
    FamilyKind.KRAWTCHOUK: AlgebraTag.OSC,
    FamilyKind.DUAL_HAHN: AlgebraTag.SL2,
    FamilyKind.RACAH: AlgebraTag.SL2,
    FamilyKind.Q_HAHN: AlgebraTag.OSC_Q,
    FamilyKind.Q_RACAH: AlgebraTag.UQ_SL2,
}

# free parameters accepted by make_instance, per kind; labels always allowed
_FREE_PARAMS = {
    FamilyKind.HAHN: ("alpha", "beta"),
    FamilyKind.KRAWTCHOUK: ("p",),
    FamilyKind.DUAL_HAHN: ("alpha",),
    FamilyKind.RACAH: ("alpha", "beta"),
    FamilyKind.Q_HAHN: ("q", "alpha", "beta"),
    FamilyKind.Q_RACAH: ("q", "alpha", "beta"),
}


@dataclass(frozen=True)
class FamilyInstance:
    """One family with fully resolved parameters, valid on the grid <= n_max.

    Classical kinds carry module labels lambda1, lambda2; q-kinds carry
    kappa_i = q^{lambda_i / 2} instead, so every formula stays rational.
    """

    kind: FamilyKind
    n_max: int
    alpha: Scalar | None = None
    beta: Scalar | None = None
    gamma: Scalar | None = None
    p: Scalar | None = None
    q: Scalar | None = None
    lambda1: Scalar | None = None
    lambda2: Scalar | None = None
    kappa1: Scalar | None = None
    kappa2: Scalar | None = None

    def to_doc(self) -> dict:
        doc = {"kind": self.kind.value, "n_max": str(self.n_max)}
        for name in ("alpha", "beta", "gamma", "p", "q",
                     "lambda1", "lambda2", "kappa1", "kappa2"):
            value = getattr(self, name)
            if value is not None:
                doc[name] = format_scalar(value)
        return doc

    @staticmethod
    def from_doc(doc: dict) -> "FamilyInstance":
        kind = FamilyKind(doc["kind"])
        known = {k: as_scalar(v) for k, v in doc.items()
                 if k not in ("kind", "n_max")}
        free = {k: v for k, v in known.items()
                if k in _FREE_PARAMS[kind]
                or k in ("lambda1", "lambda2", "kappa1", "kappa2")}
        inst = make_instance(kind, n_max=int(doc["n_max"]), **free)
        for k, v in known.items():
            if getattr(inst, k) != v:
                raise InvalidParameterError(
                    f"inconsistent document: {k}={v} does not match the "
                    f"resolved value {getattr(inst, k)}")
        return inst


def algebra_for(inst: FamilyInstance) -> AlgebraKind:
    tag = _ALGEBRA_OF[inst.kind]
    return AlgebraKind(tag, inst.q) if inst.kind.is_q else AlgebraKind(tag)


def labels(inst: FamilyInstance) -> tuple[Scalar, Scalar]:
    """Module labels: (lambda1, lambda2) classically, (kappa1, kappa2) for q."""
    if inst.kind.is_q:
        return inst.kappa1, inst.kappa2
    return inst.lambda1, inst.lambda2


def tensor_label(inst: FamilyInstance, k: int) -> Scalar:
    """Label of the k-th irreducible component of the tensor module:
    lambda1 + lambda2 + 2k, or kappa1 kappa2 q^k for the q-kinds."""
    l1, l2 = labels(inst)
    if inst.kind.is_q:
        return l1 * l2 * inst.q ** k
    return l1 + l2 + 2 * k


def make_instance(kind: FamilyKind | str, n_max: int = 8, **params) -> FamilyInstance:
    """Resolve constrained parameters, validate eagerly, return the instance.

    Free parameters per kind (labels lambda1/lambda2 or kappa1/kappa2 may
    always be given; oscillator-family labels default to 0, q-Hahn kappas
    to 1):

        hahn        alpha, beta       krawtchouk  p
        dual-hahn   alpha             racah       alpha, beta
        q-hahn      q, alpha, beta    q-racah     q, alpha, beta (kappas required)
    """
    kind = FamilyKind(kind)
    if n_max < 1:
        raise InvalidParameterError("n_max must be at least 1")
    vals = {}
    for name, raw in params.items():
        if raw is None:
            continue
        allowed = _FREE_PARAMS[kind] + (
            ("kappa1", "kappa2") if kind.is_q else ("lambda1", "lambda2"))
        if name not in allowed:
            raise InvalidParameterError(
                f"{kind.value} does not take a parameter {name!r}")
        vals[name] = as_scalar(raw)

    missing = [name for name in _FREE_PARAMS[kind] if name not in vals]
    if missing:
        raise InvalidParameterError(
            f"{kind.value} needs parameters: {', '.join(missing)}")

    if kind.is_q:
        if kind is FamilyKind.Q_RACAH and not {"kappa1", "kappa2"} <= vals.keys():
            raise InvalidParameterError("q-racah needs kappa1 and kappa2")
        vals.setdefault("kappa1", Fraction(1))
        vals.setdefault("kappa2", Fraction(1))
    else:
        vals.setdefault("lambda1", Fraction(0))
        vals.setdefault("lambda2", Fraction(0))

    if kind is FamilyKind.DUAL_HAHN:
        vals["beta"] = vals["lambda1"] + vals["lambda2"] - 2 - vals["alpha"]
    elif kind is FamilyKind.RACAH:
        vals["gamma"] = vals["lambda1"] + vals["lambda2"] - 1
    elif kind is FamilyKind.Q_RACAH:
        vals["gamma"] = vals["kappa1"] ** 2 * vals["kappa2"] ** 2 / vals["q"]

    inst = FamilyInstance(kind=kind, n_max=n_max, **vals)
    _validate(inst)
    return inst


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidParameterError(message)


def _validate(inst: FamilyInstance) -> None:
    nm = inst.n_max
    kind = inst.kind
    if kind.is_q:
        q = inst.q
        _require(q not in (0, 1, -1), "q must avoid {0, 1, -1}")
        _require(inst.kappa1 != 0 and inst.kappa2 != 0, "kappa labels must be nonzero")
        ab = inst.alpha * inst.beta
        for e in range(-nm, 2 * nm + 3):
            _require(ab * q ** e != 1,
                     f"1 - alpha*beta*q^{e} vanishes (contiguity denominator)")
        for e in range(1, nm + 1):
            _require(inst.alpha * q ** e != 1,
                     f"series denominator (alpha*q; q) vanishes at q^{e}")
        if kind is FamilyKind.Q_RACAH:
            _require(inst.alpha != 0, "q-racah needs alpha nonzero")
            bg = inst.beta * inst.gamma
            for e in range(1, nm + 1):
                _require(bg * q ** e != 1,
                         f"series denominator (beta*gamma*q; q) vanishes at q^{e}")
            for kap, name in ((inst.kappa1, "kappa1"), (inst.kappa2, "kappa2")):
                for e in range(0, nm + 1):
                    _require(kap ** 2 * q ** e != 1,
                             f"{name}^2 q^{e} = 1: module label hits a zero of "
                             f"the lowering coefficient")
            k12 = (inst.kappa1 * inst.kappa2) ** 2
            for e in range(0, 3 * nm):
                _require(k12 * q ** e != 1,
                         f"(kappa1*kappa2)^2 q^{e} = 1: a tensor component label "
                         f"hits a zero of the lowering coefficient")
        return

    if kind is FamilyKind.KRAWTCHOUK:
        _require(inst.p != 0, "p must be nonzero")
        _require(inst.p != 1, "p = 1 degenerates the orthogonality weights")
        return

    # Hahn, dual Hahn, Racah
    if kind in (FamilyKind.HAHN, FamilyKind.RACAH):
        s = inst.alpha + inst.beta
        for n in range(0, nm + 2):
            for N in range(0, nm + 1):
                _require(2 * n + s - N != 0,
                         f"2n + alpha + beta - N vanishes at (n={n}, N={N}); "
                         f"alpha + beta must avoid the integers (genericity)")
        for n in range(0, nm + 1):
            for m in range(0, nm + 1):
                _require(n - m + s + 1 != 0,
                         f"coproduct denominator vanishes on the grid at "
                         f"(n={n}, m={m})")
    for i in range(0, nm):
        _require(inst.alpha + 1 + i != 0,
                 f"series denominator (alpha+1)_k vanishes (alpha = {inst.alpha})")
    if kind is FamilyKind.RACAH:
        for i in range(0, nm):
            _require(inst.beta + inst.gamma + 1 + i != 0,
                     "series denominator (beta+gamma+1)_k vanishes")
    if kind in (FamilyKind.DUAL_HAHN, FamilyKind.RACAH):
        alg = AlgebraKind(AlgebraTag.SL2)
        for lam, name in ((inst.lambda1, "lambda1"), (inst.lambda2, "lambda2")):
            for j in range(1, nm + 1):
                _require(phi(alg, lam, j) != 0,
                         f"{name} = {lam} makes the module reducible within the "
                         f"truncation ({name} must avoid 0, -1, ..., {1 - nm})")
        for k in range(0, nm + 1):
            for j in range(1, nm + 1):
                _require(phi(alg, inst.lambda1 + inst.lambda2 + 2 * k, j) != 0,
                         f"lambda1 + lambda2 = {inst.lambda1 + inst.lambda2} makes "
                         f"a tensor component reducible within the truncation")


# ---------------------------------------------------------------------------
# polynomial values
# ---------------------------------------------------------------------------

def poly_value(inst: FamilyInstance, n: int, k: int, N: int) -> Scalar:
    """P_n(k, N), including the (q-)binomial prefactor; 0 for n outside 0..N."""
    if not 0 <= N <= inst.n_max:
        raise ValueError(f"N must lie in 0..{inst.n_max}")
    if not 0 <= k <= N:
        raise ValueError("k must lie in 0..N")
    if n < 0 or n > N:
        return Fraction(0)
    a, b, g = inst.alpha, inst.beta, inst.gamma
    kind = inst.kind
    if kind is FamilyKind.HAHN:
        return binomial(N, n) * hyper_terminating(
            [Fraction(-n), n + a + b - N + 1, Fraction(-k)],
            [a + 1, Fraction(-N)], Fraction(1), n)
    if kind is FamilyKind.KRAWTCHOUK:
        return binomial(N, n) * hyper_terminating(
            [Fraction(-n), Fraction(-k)], [Fraction(-N)], 1 / inst.p, n)
    if kind is FamilyKind.DUAL_HAHN:
        return binomial(N, n) * hyper_terminating(
            [Fraction(-n), Fraction(-k), k + a + b + 1],
            [a + 1, Fraction(-N)], Fraction(1), n)
    if kind is FamilyKind.RACAH:
        return binomial(N, n) * hyper_terminating(
            [Fraction(-n), n + a + b - N + 1, Fraction(-k), k + g],
            [a + 1, b + g + 1, Fraction(-N)], Fraction(1), n)
    q = inst.q
    if kind is FamilyKind.Q_HAHN:
        return q_binomial(N, n, q) * q_hyper_terminating(
            [q ** -n, a * b * q ** (n - N + 1), q ** -k],
            [a * q, q ** -N], q, q, n)
    return q_binomial(N, n, q) * q_hyper_terminating(
        [q ** -n, a * b * q ** (n - N + 1), q ** -k, g * q ** k],
        [a * q, b * g * q, q ** -N], q, q, n)


# ---------------------------------------------------------------------------
# contiguity coefficient data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContiguityData:
    alpha1: Callable[[int, int], Scalar]
    alpha2: Callable[[int, int], Scalar]
    beta1: Callable[[int, int], Scalar]
    beta2: Callable[[int, int], Scalar]
    mu: Callable[[int, int], Scalar]


def contiguity(inst: FamilyInstance) -> ContiguityData:
    """Coefficient functions of the two contiguity relations."""
    kind = inst.kind
    a, b, g = inst.alpha, inst.beta, inst.gamma
    if kind is FamilyKind.HAHN:
        # second relation rescaled by -1 so mu matches the oscillator lowering
        return ContiguityData(
            alpha1=lambda n, N: (n + a + b + 1) / (2 * n + a + b - N),
            alpha2=lambda n, N: (n + a + b - N) / (2 * n + a + b - N),
            beta1=lambda n, N: -(n + 1 + a) * (n + 1) / (2 * n + 2 + a + b - N),
            beta2=lambda n, N: -(n + 1 + b - N) * (N - n) / (2 * n + 2 + a + b - N),
            mu=lambda k, N: Fraction(k - N),
        )
    if kind is FamilyKind.KRAWTCHOUK:
        p = inst.p
        return ContiguityData(
            alpha1=lambda n, N: Fraction(1),
            alpha2=lambda n, N: Fraction(1),
            beta1=lambda n, N: -p * (n + 1),
            beta2=lambda n, N: -(1 - p) * (N - n),
            mu=lambda k, N: Fraction(k - N),
        )
    if kind is FamilyKind.DUAL_HAHN:
        return ContiguityData(
            alpha1=lambda n, N: Fraction(1),
            alpha2=lambda n, N: Fraction(1),
            beta1=lambda n, N: -(n + 1 + a) * (n + 1),
            beta2=lambda n, N: (N - n + b) * (n - N),
            mu=lambda k, N: (k - N) * (N + k + a + b + 1),
        )
    if kind is FamilyKind.RACAH:
        return ContiguityData(
            alpha1=lambda n, N: (n + a + b + 1) / (2 * n + a + b - N),
            alpha2=lambda n, N: (n + a + b - N) / (2 * n + a + b - N),
            beta1=lambda n, N: -(n + b + g + 1) * (n + a + 1) * (n + 1)
                               / (2 * n + 2 + a + b - N),
            beta2=lambda n, N: (n + 1 + b - N) * (n + 1 + a - g - N) * (N - n)
                               / (2 * n + 2 + a + b - N),
            mu=lambda k, N: (k - N) * (N + k + g),
        )
    q = inst.q
    if kind is FamilyKind.Q_HAHN:
        return ContiguityData(
            alpha1=lambda n, N: (1 - a * b * q ** (n + 1)) / (1 - a * b * q ** (2 * n - N)),
            alpha2=lambda n, N: q ** n * (1 - a * b * q ** (n - N))
                                / (1 - a * b * q ** (2 * n - N)),
            beta1=lambda n, N: (1 - a * q ** (n + 1)) * (1 - q ** (n + 1))
                               / (1 - a * b * q ** (2 * n + 2 - N)),
            beta2=lambda n, N: a * q ** (n + 1) * (1 - b * q ** (n + 1 - N))
                               * (1 - q ** (N - n)) / (1 - a * b * q ** (2 * n + 2 - N)),
            mu=lambda k, N: 1 - q ** (N - k),
        )
    return ContiguityData(
        alpha1=lambda n, N: (1 - a * b * q ** (n + 1)) / (1 - a * b * q ** (2 * n - N)),
        alpha2=lambda n, N: q ** n * (1 - a * b * q ** (n - N))
                            / (1 - a * b * q ** (2 * n - N)),
        beta1=lambda n, N: (1 - b * g * q ** (n + 1)) * (1 - a * q ** (n + 1))
                           * (1 - q ** (n + 1)) / (1 - a * b * q ** (2 * n + 2 - N)),
        beta2=lambda n, N: (1 - b * q ** (n + 1 - N)) * (a * q ** (n + 1) - g * q ** N)
                           * (1 - q ** (N - n)) / (1 - a * b * q ** (2 * n + 2 - N)),
        mu=lambda k, N: (1 - q ** (N - k)) * (1 - g * q ** (N + k)),
    )


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_contiguity(inst: FamilyInstance, data: ContiguityData | None = None) -> Report:
    """Verify both contiguity relations exactly on the whole truncated grid.

    Boundary terms enter through the zero convention; coefficients are never
    evaluated against a vanishing polynomial factor, so every coefficient
    evaluation stays inside the validated grid.
    """
    data = data or contiguity(inst)
    nm = inst.n_max
    rep = Report(suite=f"contiguity:{inst.kind.value}", params=inst.to_doc())

    rng = f"0<=N<{nm}, -1<=n<=N+1, 0<=k<=N"
    witness = None
    for N in range(nm):
        for n in range(-1, N + 2):
            for k in range(N + 1):
                lhs = poly_value(inst, n, k, N + 1)
                rhs = Fraction(0)
                if 0 <= n - 1 <= N:
                    rhs += data.alpha1(n, N) * poly_value(inst, n - 1, k, N)
                if 0 <= n <= N:
                    rhs += data.alpha2(n, N) * poly_value(inst, n, k, N)
                if lhs != rhs:
                    witness = ({"N": N, "n": n, "k": k}, lhs, rhs)
                    break
            if witness:
                break
        if witness:
            break
    rep.add(CheckResult.ok("raising-contiguity", rng) if witness is None
            else CheckResult.fail("raising-contiguity", rng, *witness))

    witness = None
    for N in range(nm):
        for n in range(-1, N + 2):
            for k in range(N + 1):
                m = data.mu(k, N)
                lhs = Fraction(0)
                if m != 0 and N >= 1:
                    lhs = m * poly_value(inst, n, k, N - 1)
                rhs = Fraction(0)
                if 0 <= n + 1 <= N:
                    rhs += data.beta1(n, N) * poly_value(inst, n + 1, k, N)
                if 0 <= n <= N:
                    rhs += data.beta2(n, N) * poly_value(inst, n, k, N)
                if lhs != rhs:
                    witness = ({"N": N, "n": n, "k": k}, lhs, rhs)
                    break
            if witness:
                break
        if witness:
            break
    rep.add(CheckResult.ok("lowering-contiguity", rng) if witness is None
            else CheckResult.fail("lowering-contiguity", rng, *witness))
    return rep


def check_three_term_dual_hahn(inst: FamilyInstance,
                               mu_fn: Callable[[int, int], Scalar] | None = None) -> Report:
    """Three-term recurrence of the dual Hahn family at alpha = lambda1 - 1:

        A_n P_{n+1} + (A_n + C_n) P_n + C_n P_{n-1} = mu(k) P_n

    with A_n = (n+1)(n+lambda1), C_n = (N-n+1)(N-n+lambda2) and
    mu(k) = (N-k+1)(N+k+lambda1+lambda2), all at fixed level N.
    """
    if inst.kind is not FamilyKind.DUAL_HAHN:
        raise InvalidParameterError("three-term recurrence check needs a dual Hahn instance")
    if inst.alpha != inst.lambda1 - 1:
        raise InvalidParameterError("three-term recurrence check needs alpha = lambda1 - 1")
    l1, l2 = inst.lambda1, inst.lambda2
    nm = inst.n_max
    rep = Report(suite="three-term:dual-hahn", params=inst.to_doc())
    rng = f"0<=n,k<=N<={nm}"
    if mu_fn is None:
        mu_fn = lambda k, N: (N - k + 1) * (N + k + l1 + l2)
    for N in range(nm + 1):
        for n in range(N + 1):
            for k in range(N + 1):
                a_n = (n + 1) * (n + l1)
                c_n = (N - n + 1) * (N - n + l2)
                lhs = (a_n * poly_value(inst, n + 1, k, N)
                       + (a_n + c_n) * poly_value(inst, n, k, N)
                       + c_n * poly_value(inst, n - 1, k, N))
                rhs = mu_fn(k, N) * poly_value(inst, n, k, N)
                if lhs != rhs:
                    rep.add(CheckResult.fail("three-term-recurrence", rng,
                                             {"N": N, "n": n, "k": k}, lhs, rhs))
                    return rep
    rep.add(CheckResult.ok("three-term-recurrence", rng))
    return rep


def limit_hahn_to_krawtchouk(p: Scalar, z_list: list[Scalar],
                             n: int, k: int, N: int) -> Report:
    """First-order convergence of Hahn to Krawtchouk under alpha = p z,
    beta = (1-p) z as z grows.

    For consecutive z1 < z2 the exact difference d(z) = |Q_n - K_n| must obey
    d(z2)/d(z1) <= 2 z1/z2, and the z -> infinity limits of the contiguity
    coefficients must equal the Krawtchouk coefficient functions exactly.
    """
    p = as_scalar(p)
    zs = [as_scalar(z) for z in z_list]
    if any(z2 <= z1 for z1, z2 in zip(zs, zs[1:])) or any(z <= 0 for z in zs):
        raise InvalidParameterError("z_list must be positive and increasing")
    nm = max(N, 1)
    kraw = make_instance(FamilyKind.KRAWTCHOUK, p=p, n_max=nm)
    target = poly_value(kraw, n, k, N)
    rep = Report(suite="limit:hahn->krawtchouk",
                 params={"p": format_scalar(p), "n": n, "k": k, "N": N,
                         "z_list": ",".join(format_scalar(z) for z in zs)})
    diffs = []
    for z in zs:
        hahn = make_instance(FamilyKind.HAHN, alpha=p * z, beta=(1 - p) * z, n_max=nm)
        diffs.append(abs(poly_value(hahn, n, k, N) - target))
    rng = f"z in {{{rep.params['z_list']}}}"
    decay = CheckResult.ok("difference-decay", rng)
    for (z1, d1), (z2, d2) in zip(zip(zs, diffs), zip(zs[1:], diffs[1:])):
        ok = (d2 == 0) if d1 == 0 else (d2 / d1 <= 2 * z1 / z2)
        if not ok:
            decay = CheckResult.fail("difference-decay", rng,
                                     {"z1": z1, "z2": z2}, d2 / d1, 2 * z1 / z2)
            break
    rep.add(decay)

    kdata = contiguity(kraw)
    limits = [
        ("alpha1", kdata.alpha1(n, N), Fraction(1)),
        ("alpha2", kdata.alpha2(n, N), Fraction(1)),
        ("beta1", kdata.beta1(n, N), -p * (n + 1)),
        ("beta2", kdata.beta2(n, N), -(1 - p) * (N - n)),
        ("mu", kdata.mu(k, N), Fraction(k - N)),
    ]
    bad = next(((nme, got, want) for nme, got, want in limits if got != want), None)
    rep.add(CheckResult.ok("coefficient-limits", f"(n,k,N)=({n},{k},{N})") if bad is None
            else CheckResult.fail("coefficient-limits", f"(n,k,N)=({n},{k},{N})",
                                  {"coefficient": bad[0]}, bad[1], bad[2]))
    return rep


def limit_racah_to_dual_hahn(alpha: Scalar, lambda1: Scalar, lambda2: Scalar,
                             beta_list: list[Scalar], n_max: int = 8) -> Report:
    """First-order convergence of the Racah coefficient functions to the dual
    Hahn ones as beta grows, at shared alpha and labels (so the Racah gamma
    equals the dual Hahn alpha + beta + 1 automatically). The mu functions
    agree exactly, with no limit."""
    alpha = as_scalar(alpha)
    betas = [as_scalar(b) for b in beta_list]
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])) or any(b <= 0 for b in betas):
        raise InvalidParameterError("beta_list must be positive and increasing")
    dual = make_instance(FamilyKind.DUAL_HAHN, lambda1=lambda1, lambda2=lambda2,
                         alpha=alpha, n_max=n_max)
    ddata = contiguity(dual)
    insts = [make_instance(FamilyKind.RACAH, lambda1=lambda1, lambda2=lambda2,
                           alpha=alpha, beta=b, n_max=n_max) for b in betas]
    rep = Report(suite="limit:racah->dual-hahn",
                 params={"alpha": format_scalar(alpha),
                         "lambda1": format_scalar(as_scalar(lambda1)),
                         "lambda2": format_scalar(as_scalar(lambda2)),
                         "beta_list": ",".join(format_scalar(b) for b in betas),
                         "n_max": n_max})
    grid = [(n, N) for N in range(n_max + 1) for n in range(N + 1)]
    for coeff in ("alpha1", "alpha2", "beta1", "beta2"):
        dual_fn = getattr(ddata, coeff)
        result = CheckResult.ok(f"{coeff}-decay", f"0<=n<=N<={n_max}")
        for (b1, i1), (b2, i2) in zip(zip(betas, insts), zip(betas[1:], insts[1:])):
            d1fn = getattr(contiguity(i1), coeff)
            d2fn = getattr(contiguity(i2), coeff)
            for n, N in grid:
                want = dual_fn(n, N)
                d1 = abs(d1fn(n, N) - want)
                d2 = abs(d2fn(n, N) - want)
                ok = (d2 == 0) if d1 == 0 else (d2 / d1 <= 2 * b1 / b2)
                if not ok:
                    result = CheckResult.fail(
                        f"{coeff}-decay", f"0<=n<=N<={n_max}",
                        {"beta1": b1, "beta2": b2, "n": n, "N": N},
                        d2, d1 * 2 * b1 / b2)
                    break
            if not result.passed:
                break
        rep.add(result)
    mu_ok = CheckResult.ok("mu-equality", f"0<=k<=N<={n_max}")
    rdata = contiguity(insts[0])
    for N in range(n_max + 1):
        for k in range(N + 1):
            if rdata.mu(k, N) != ddata.mu(k, N):
                mu_ok = CheckResult.fail("mu-equality", f"0<=k<=N<={n_max}",
                                         {"k": k, "N": N},
                                         rdata.mu(k, N), ddata.mu(k, N))
                break
    rep.add(mu_ok)
    return rep


# ---------------------------------------------------------------------------
# random draws
# ---------------------------------------------------------------------------

def _unit_fraction(rng) -> Fraction:
    den = rng.randint(2, 20)
    return Fraction(rng.randint(1, den - 1), den)


def _positive_fraction(rng) -> Fraction:
    return Fraction(rng.randint(1, 20), rng.randint(1, 20))


def _draw_params(kind: FamilyKind, rng) -> dict:
    if kind is FamilyKind.HAHN:
        return {"alpha": _positive_fraction(rng), "beta": _positive_fraction(rng),
                "lambda1": _positive_fraction(rng), "lambda2": _positive_fraction(rng)}
    if kind is FamilyKind.KRAWTCHOUK:
        return {"p": _unit_fraction(rng),
                "lambda1": _positive_fraction(rng), "lambda2": _positive_fraction(rng)}
    if kind is FamilyKind.DUAL_HAHN:
        l1 = 1 + _positive_fraction(rng)
        l2 = 1 + _positive_fraction(rng)
        # alpha strictly between 0 and l1 + l2 - 2 keeps both alpha, beta > -1
        return {"lambda1": l1, "lambda2": l2,
                "alpha": (l1 + l2 - 2) * _unit_fraction(rng)}
    if kind is FamilyKind.RACAH:
        return {"lambda1": 1 + _positive_fraction(rng),
                "lambda2": 1 + _positive_fraction(rng),
                "alpha": _unit_fraction(rng), "beta": _unit_fraction(rng)}
    base = Fraction(rng.randint(1, 3), rng.randint(2, 4))
    while base >= 1:
        base = Fraction(rng.randint(1, 3), rng.randint(2, 4))
    q = base ** 2  # squares keep q^(1/2) rational for the U_q(sl2) checks
    # labels in (0, 1) keep every kappa-dependent denominator away from 1
    return {"q": q, "alpha": _unit_fraction(rng), "beta": _unit_fraction(rng),
            "kappa1": _unit_fraction(rng), "kappa2": _unit_fraction(rng)}


def random_instance(kind: FamilyKind | str, rng, n_max: int = 8,
                    max_tries: int = 200) -> FamilyInstance:
    """Draw a valid instance: numerators and denominators of drawn rationals
    stay <= 20, redrawing on validation failure. A draw is also rejected when
    a coefficient block is singular or the invariant form degenerates (a zero
    norm on some level), since either would defeat the basis-change and
    orthogonality checks the draws exist to feed."""
    kind = FamilyKind(kind)
    for _ in range(max_tries):
        try:
            inst = make_instance(kind, n_max=n_max, **_draw_params(kind, rng))
        except InvalidParameterError:
            continue
        if all(_block_nondegenerate(inst, N) for N in range(1, n_max + 1)):
            return inst
    raise RuntimeError(f"no valid draw for {kind.value} after {max_tries} tries")


def _block_nondegenerate(inst: FamilyInstance, N: int) -> bool:
    mat = RatMat.build(N + 1, N + 1, lambda n, k: poly_value(inst, n, k, N))
    if rank(mat) != N + 1:
        return False
    rows = []
    for k in range(N + 1):
        for l in range(k + 1, N + 1):
            rows.append([mat.entry(n, k) * mat.entry(n, l) for n in range(N + 1)])
    basis = nullspace(RatMat.from_rows(rows))
    if len(basis) != 1 or basis[0][0] == 0:
        return False
    omega = basis[0]
    return all(
        sum((mat.entry(n, l) ** 2 * omega[n] for n in range(N + 1)), Fraction(0)) != 0
        for l in range(N + 1))
