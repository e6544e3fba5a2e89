"""Clebsch-Gordan blocks, the independent lowest-weight oracle, and the
orthogonality weights.

A CG block at total level N is the (N+1) x (N+1) matrix P with P[n][k] =
P_n(k, N); its column k holds the coordinates of the k-th adapted basis
vector in the product basis (n, N-n). Column k of the level-N block must be
mapped by Delta(E) onto column k of level N+1, and by Delta(F) onto the
lowering coefficient of the component with label index k times column k of
level N-1; the k = N column must be annihilated.

The oracle rebuilds the same columns without evaluating a single polynomial:
the kernel of Delta(F) on block k (which must be one-dimensional) seeds the
k-th tower, and repeated application of Delta(E) fills in the higher levels.
Entrywise agreement with the polynomial route is the central certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebras import phi
from .coproduct import Delta, TensorModule, build_delta
from .exactmath import Scalar, format_scalar, parse_scalar
from .families import FamilyInstance, algebra_for, poly_value, tensor_label
from .linalg import RatMat, nullspace, rank
from .report import CheckResult, Report

__all__ = [
    "CGBlock", "WeightData", "DegenerateKernelError", "WeightSolutionError",
    "cg_block", "verify_raising", "verify_lowering", "lowest_weight_oracle",
    "orthogonality_weights", "verify_weight_grading",
    "tensor_lowering_eigenvalue",
]


class DegenerateKernelError(RuntimeError):
    """The lowering kernel on some block is not one-dimensional."""


class WeightSolutionError(RuntimeError):
    """The orthogonality weight system has no one-dimensional solution, or a
    normalization or norm vanished."""


@dataclass(frozen=True)
class CGBlock:
    N: int
    P: RatMat

    def to_doc(self) -> dict:
        return {"N": self.N,
                "P": [[format_scalar(x) for x in row] for row in self.P.a]}

    @staticmethod
    def from_doc(doc: dict) -> "CGBlock":
        P = RatMat.from_rows([[parse_scalar(x) for x in row] for row in doc["P"]])
        return CGBlock(int(doc["N"]), P)


@dataclass(frozen=True)
class WeightData:
    N: int
    omega: tuple[Scalar, ...]
    omega_prime: tuple[Scalar, ...]
    normalization: str = "omega0=1"

    def to_doc(self) -> dict:
        return {"N": self.N,
                "omega": [format_scalar(x) for x in self.omega],
                "omega_prime": [format_scalar(x) for x in self.omega_prime],
                "normalization": self.normalization}

    @staticmethod
    def from_doc(doc: dict) -> "WeightData":
        return WeightData(int(doc["N"]),
                          tuple(parse_scalar(x) for x in doc["omega"]),
                          tuple(parse_scalar(x) for x in doc["omega_prime"]),
                          doc.get("normalization", "omega0=1"))


def cg_block(inst: FamilyInstance, N: int) -> CGBlock:
    return CGBlock(N, RatMat.build(N + 1, N + 1,
                                   lambda n, k: poly_value(inst, n, k, N)))


def tensor_lowering_eigenvalue(inst: FamilyInstance, k: int, j: int) -> Scalar:
    """Lowering coefficient of the k-th tensor component at its level j."""
    return phi(algebra_for(inst), tensor_label(inst, k), j)


def verify_raising(inst: FamilyInstance, tm: TensorModule, N: int,
                   blocks: dict[int, CGBlock] | None = None,
                   delta: Delta | None = None) -> Report:
    """Delta(E) must map column k of block N to column k of block N+1."""
    if not 0 <= N < tm.n_max:
        raise ValueError("raising check needs 0 <= N < n_max")
    delta = delta or build_delta(inst, tm)
    blocks = blocks or {}
    here = blocks.get(N) or cg_block(inst, N)
    above = blocks.get(N + 1) or cg_block(inst, N + 1)
    image = delta.e.blocks[N] @ here.P
    rep = Report(suite=f"raising:{inst.kind.value}", params=inst.to_doc())
    rng = f"block {N} -> {N + 1}, 0<=k<={N}"
    for k in range(N + 1):
        for n in range(N + 2):
            if image.entry(n, k) != above.P.entry(n, k):
                rep.add(CheckResult.fail("raising", rng, {"N": N, "n": n, "k": k},
                                         image.entry(n, k), above.P.entry(n, k)))
                return rep
    rep.add(CheckResult.ok("raising", rng))
    return rep


def verify_lowering(inst: FamilyInstance, tm: TensorModule, N: int,
                    blocks: dict[int, CGBlock] | None = None,
                    delta: Delta | None = None) -> Report:
    """Delta(F) on column k of block N gives the component lowering
    eigenvalue times column k of block N-1; the k = N column dies."""
    if not 1 <= N <= tm.n_max:
        raise ValueError("lowering check needs 1 <= N <= n_max")
    delta = delta or build_delta(inst, tm)
    blocks = blocks or {}
    here = blocks.get(N) or cg_block(inst, N)
    below = blocks.get(N - 1) or cg_block(inst, N - 1)
    image = delta.f.blocks[N] @ here.P
    rep = Report(suite=f"lowering:{inst.kind.value}", params=inst.to_doc())
    rng = f"block {N} -> {N - 1}, 0<=k<={N}"
    for k in range(N + 1):
        eig = tensor_lowering_eigenvalue(inst, k, N - k) if k < N else Fraction(0)
        for n in range(N):
            want = eig * below.P.entry(n, k) if k < N else Fraction(0)
            if image.entry(n, k) != want:
                rep.add(CheckResult.fail("lowering", rng, {"N": N, "n": n, "k": k},
                                         image.entry(n, k), want))
                return rep
    rep.add(CheckResult.ok("lowering", rng))
    return rep


def lowest_weight_oracle(inst: FamilyInstance, tm: TensorModule) -> list[CGBlock]:
    """Rebuild every CG block from the coproduct alone.

    For each k the kernel of Delta(F) on block k must be exactly
    one-dimensional; the kernel vector is normalized so its n = 0 entry
    matches P_0(k, k) (anchoring at the smallest nonzero entry if that one
    ever vanished), then pushed up with Delta(E).
    """
    delta = build_delta(inst, tm)
    nm = tm.n_max
    columns: dict[tuple[int, int], tuple[Fraction, ...]] = {}
    for k in range(nm + 1):
        basis = nullspace(delta.f.blocks[k])
        if len(basis) != 1:
            raise DegenerateKernelError(
                f"kernel of the lowering map on block {k} has dimension "
                f"{len(basis)}, expected 1")
        vec = basis[0]
        anchor = next((i for i in range(k + 1)
                       if vec[i] != 0 and poly_value(inst, i, k, k) != 0), None)
        if anchor is None:
            raise DegenerateKernelError(
                f"kernel vector on block {k} cannot be normalized against the "
                f"polynomial column")
        scale = poly_value(inst, anchor, k, k) / vec[anchor]
        vec = tuple(scale * x for x in vec)
        columns[(k, k)] = vec
        for N in range(k, nm):
            vec = delta.e.blocks[N].apply(vec)
            columns[(k, N + 1)] = vec
    out = []
    for N in range(nm + 1):
        out.append(CGBlock(N, RatMat.build(
            N + 1, N + 1, lambda n, k: columns[(k, N)][n])))
    return out


def orthogonality_weights(inst: FamilyInstance, N: int,
                          block: CGBlock | None = None) -> WeightData:
    """Solve for the diagonal weights Omega making the CG columns orthogonal:

        sum_n P[n][k] P[n][l] Omega_n = delta_{k,l} Omega'_l

    The homogeneous off-diagonal system must have a one-dimensional solution
    space; Omega is normalized to Omega_0 = 1 and every Omega'_l must be
    nonzero. Signs are reported as found; no positivity is claimed.
    """
    P = (block or cg_block(inst, N)).P
    if rank(P) != N + 1:
        raise WeightSolutionError(f"CG block {N} is singular")
    if N == 0:
        return WeightData(0, (Fraction(1),), (Fraction(1),))
    rows = []
    for k in range(N + 1):
        for l in range(k + 1, N + 1):
            rows.append([P.entry(n, k) * P.entry(n, l) for n in range(N + 1)])
    basis = nullspace(RatMat.from_rows(rows))
    if len(basis) != 1:
        raise WeightSolutionError(
            f"weight solution space at block {N} has dimension {len(basis)}, "
            f"expected 1")
    omega = basis[0]
    if omega[0] == 0:
        raise WeightSolutionError("weight normalization Omega_0 vanishes")
    omega = tuple(x / omega[0] for x in omega)
    omega_prime = []
    for l in range(N + 1):
        norm = sum((P.entry(n, l) ** 2 * omega[n] for n in range(N + 1)),
                   Fraction(0))
        if norm == 0:
            raise WeightSolutionError(f"Omega' vanishes at column {l}")
        omega_prime.append(norm)
    return WeightData(N, omega, tuple(omega_prime))


def verify_weight_grading(inst: FamilyInstance, tm: TensorModule,
                          delta: Delta | None = None) -> Report:
    """Delta(H) (or Delta(K)) must act on block N as the scalar
    lambda1 + lambda2 + 2N (or kappa1 kappa2 q^N)."""
    delta = delta or build_delta(inst, tm)
    alg = tm.left.algebra
    rep = Report(suite=f"weight-grading:{inst.kind.value}", params=inst.to_doc())
    rng = f"blocks 0..{tm.n_max}"
    for N in range(tm.n_max + 1):
        if alg.is_q:
            want = tm.left.label * tm.right.label * alg.q ** N
        else:
            want = tm.left.label + tm.right.label + 2 * N
        b = delta.hk.blocks[N]
        for i in range(N + 1):
            for j in range(N + 1):
                expected = want if i == j else Fraction(0)
                if b.entry(i, j) != expected:
                    rep.add(CheckResult.fail("weight-grading", rng,
                                             {"N": N, "row": i, "col": j},
                                             b.entry(i, j), expected))
                    return rep
    rep.add(CheckResult.ok("weight-grading", rng))
    return rep
