"""Joint comodules, the simple census, and degree-truncated products.

A joint comodule is one space carrying a comodule structure over every
family member; equivalently a representation of the free product of the
dual algebras.  The degree-d truncated product is the dual coalgebra of
that free product modulo the intersection of all annihilators of
representations of dimension <= d, together with the restriction
projections to each factor.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Optional, Sequence

from . import budget as budget_mod
from .coalgebra import (
    Coalgebra,
    FinAlgebra,
    ValidationReport,
    dual_algebra,
    is_coalgebra_morphism,
    validate_coalgebra,
)
from .fields import Embedding, Field, FieldError
from .linalg import Matrix, Subspace
from .presented import (
    PresentedAlgebra,
    Representation,
    are_isomorphic,
    enumerate_representations,
    free_product,
    is_simple,
)


# ---------------------------------------------------------------------------
# comodules and the module/comodule translation


class Comodule:
    """Right comodule: coaction rho: V -> V (x) C as a (v*n) x v matrix.

    Row index (b, k) -> b*n + k encodes the basis vector x_b (x) e_k.
    """

    def __init__(self, coalgebra: Coalgebra, dim: int, rho: Matrix):
        self.coalgebra = coalgebra
        self.dim = dim
        self.rho = rho
        n = coalgebra.dim
        if rho.nrows != dim * n or rho.ncols != dim:
            raise FieldError("coaction matrix has the wrong shape")

    def validate(self) -> ValidationReport:
        C = self.coalgebra
        F = C.field
        v, n = self.dim, C.dim
        R = self.rho.rows
        # counit law: sum_k eps_k rho[(b,k),a] = delta_ab
        for a in range(v):
            for b in range(v):
                acc = F.zero()
                for k in range(n):
                    acc = F.add(acc, F.mul(C.counit[k], R[b * n + k][a]))
                want = F.one() if a == b else F.zero()
                if not F.eq(acc, want):
                    return ValidationReport(False, "counit", (a, b), "coaction counit law fails")
        # coassociativity: (rho (x) id) rho = (id (x) Delta) rho
        for a in range(v):
            for c in range(v):
                for k in range(n):
                    for l in range(n):
                        lhs = F.zero()
                        for b in range(v):
                            lhs = F.add(lhs, F.mul(R[b * n + l][a], R[c * n + k][b]))
                        rhs = F.zero()
                        for m in range(n):
                            coeff = C.delta.get((m, k, l))
                            if coeff is not None:
                                rhs = F.add(rhs, F.mul(R[c * n + m][a], coeff))
                        if not F.eq(lhs, rhs):
                            return ValidationReport(
                                False, "coassociativity", (a, c, k, l), "coaction coassociativity fails"
                            )
        return ValidationReport(True)

    def action_matrix(self, k: int) -> Matrix:
        """Matrix of the dual-basis functional e_k* acting on V."""
        F = self.coalgebra.field
        n = self.coalgebra.dim
        v = self.dim
        return Matrix(F, [[self.rho.rows[b * n + k][a] for a in range(v)] for b in range(v)])

    @staticmethod
    def from_action_matrices(C: Coalgebra, mats: Sequence[Matrix]) -> "Comodule":
        F = C.field
        n = C.dim
        v = mats[0].nrows
        rows = []
        for b in range(v):
            for k in range(n):
                rows.append([mats[k].rows[b][a] for a in range(v)])
        return Comodule(C, v, Matrix(F, rows))


def comodule_to_rep(V: Comodule, presentation: Optional[PresentedAlgebra] = None) -> Representation:
    """Translate a comodule into a representation of the dual algebra.

    The action is f.x = (id (x) f)(rho(x)); round-trips exactly with
    rep_to_comodule.
    """
    rep = V.validate()
    if not rep:
        raise FieldError(f"invalid coaction: {rep.message}")
    C = V.coalgebra
    P = presentation if presentation is not None else family_presentation([C])
    mats = []
    for sym, k in P.factor_gens[0]:
        mats.append(V.action_matrix(k))
    return Representation(P, V.dim, mats)


def rep_to_comodule(r: Representation, factor_index: int = 0) -> Comodule:
    """Inverse translation; the presentation must carry factor metadata."""
    P = r.presentation
    if P.factors is None:
        raise FieldError("representation is not over a free-product presentation")
    A = P.factors[factor_index]
    C = _coalgebra_of_factor(P, factor_index)
    F = P.field
    k0, unit = P.factor_unit_data[factor_index]
    mats = {}
    for sym, k in P.factor_gens[factor_index]:
        mats[k] = r.mats[sym - 1]
    ident = Matrix.identity(F, r.dim)
    acc = ident
    for k, M in mats.items():
        acc = acc.sub(M.scale(unit[k]))
    mats[k0] = acc.scale(F.inv(unit[k0]))
    return Comodule.from_action_matrices(C, [mats[k] for k in range(A.dim)])


def _coalgebra_of_factor(P: PresentedAlgebra, i: int) -> Coalgebra:
    fam = getattr(P, "family", None)
    if fam is not None:
        return fam[i]
    from .coalgebra import dual_coalgebra

    return dual_coalgebra(P.factors[i])


class JointComodule:
    """One space with a comodule structure over every family member."""

    def __init__(self, family, dim, comodules):
        self.family = tuple(family)
        self.dim = dim
        self.comodules = tuple(comodules)
        if len(self.comodules) != len(self.family):
            raise FieldError("one comodule per family member required")

    def validate(self) -> bool:
        return all(V.validate().ok for V in self.comodules)

    @staticmethod
    def from_rep(r: Representation) -> "JointComodule":
        P = r.presentation
        if P.factors is None:
            raise FieldError("representation is not over a free-product presentation")
        comods = [rep_to_comodule(r, i) for i in range(len(P.factors))]
        return JointComodule([V.coalgebra for V in comods], r.dim, comods)


def family_presentation(family: Sequence[Coalgebra]) -> PresentedAlgebra:
    """Free product of the dual algebras, tagged with the family."""
    family = tuple(family)
    if not family:
        raise FieldError("empty family; use the trivial coalgebra explicitly")
    P = free_product([dual_algebra(C) for C in family])
    P.family = family
    return P


def joint_to_rep(J: JointComodule, P: Optional[PresentedAlgebra] = None) -> Representation:
    if P is None:
        P = family_presentation(J.family)
    mats = [None] * P.n_generators
    for fi, V in enumerate(J.comodules):
        for sym, k in P.factor_gens[fi]:
            mats[sym - 1] = V.action_matrix(k)
    return Representation(P, J.dim, mats)


# ---------------------------------------------------------------------------
# simple census


class SimpleCensus:
    """Iso-classes of simple joint comodules, keyed by dimension."""

    def __init__(self, family, max_dim, classes):
        self.family = tuple(family)
        self.max_dim = max_dim
        self.classes = classes  # dim -> list of Representation (lex-least reps)

    def counts(self):
        return {e: len(self.classes.get(e, [])) for e in range(1, self.max_dim + 1)}

    def witnesses(self, e):
        return [JointComodule.from_rep(r) for r in self.classes.get(e, [])]

    def to_json(self):
        return {
            "max_dim": self.max_dim,
            "census": {str(e): len(self.classes.get(e, [])) for e in range(1, self.max_dim + 1)},
            "witnesses": {
                str(e): [r.to_json() for r in reps] for e, reps in self.classes.items()
            },
        }


def enumerate_simple_joint(family, d: int, budget=None) -> SimpleCensus:
    """Census of simple joint comodules of each dimension <= d.

    Representations of the free product of dual algebras are enumerated,
    filtered by simplicity, and grouped by isomorphism; the lexicographically
    least representation represents each class.
    """
    P = family_presentation(family)
    classes = {}
    for e in range(1, d + 1):
        reps = enumerate_representations(P, e, budget)
        found = []
        for r in reps:
            if not is_simple(r):
                continue
            for rep_cls in found:
                if are_isomorphic(rep_cls, r, budget):
                    break
            else:
                found.append(r)
        classes[e] = found
    return SimpleCensus(family, d, classes)


# ---------------------------------------------------------------------------
# left-ideal machinery for finite-dimensional effective algebras


def echelon_subspaces(F: Field, n: int, dims=None, budget=None):
    """All subspaces of F^n by echelon basis, deterministic order."""
    if dims is None:
        dims = range(n + 1)
    elems = list(F.elements())
    counter = 0
    limit = budget_mod.resolve(budget)
    for r in dims:
        if r == 0:
            yield Subspace.zero(F, n)
            continue
        for pivots in combinations(range(n), r):
            slots = [
                (i, j)
                for i in range(r)
                for j in range(n)
                if j not in pivots and j > pivots[i]
            ]
            for vals in product(elems, repeat=len(slots)):
                counter += 1
                if counter > limit:
                    raise budget_mod.BudgetExceeded(counter, limit, "subspace enumeration")
                rows = []
                for i in range(r):
                    row = [F.zero()] * n
                    row[pivots[i]] = F.one()
                    rows.append(row)
                for (i, j), v in zip(slots, vals):
                    rows[i][j] = v
                yield Subspace(F, n, rows)


def left_ideals(A: FinAlgebra, codims, budget=None):
    """Left ideals of given codimensions, in deterministic order."""
    n = A.dim
    dims = sorted({n - c for c in codims if 0 <= c <= n}, reverse=True)
    for L in echelon_subspaces(A.field, n, dims, budget):
        stable = True
        for v in L.basis:
            for i in range(n):
                if not L.contains(A.product_vec(A.basis_vec(i), v)):
                    stable = False
                    break
            if not stable:
                break
        if stable:
            yield L


def cyclic_quotient_rep(A: FinAlgebra, L: Subspace, P: PresentedAlgebra) -> Representation:
    """The representation of A on A/L, over the unit-completed presentation."""
    F = A.field
    n = A.dim
    pivots = [next(j for j, x in enumerate(row) if not F.is_zero(x)) for row in L.basis]
    free = [j for j in range(n) if j not in pivots]
    e = len(free)

    def project(vec):
        red = L.reduce(vec)
        return tuple(red[j] for j in free)

    mats = []
    for sym, k in P.factor_gens[0]:
        cols = []
        for j in free:
            cols.append(project(A.product_vec(A.basis_vec(k), A.basis_vec(j))))
        mats.append(Matrix(F, zip(*cols)))
    return Representation(P, e, mats, check=False)


def _module_dims_of_factor(A: FinAlgebra, dmax: int, budget=None):
    """Achievable module dimensions <= dmax, plus cyclic witness reps.

    The dimensions of nonzero modules form the monoid generated by the
    dimensions of cyclic quotients A/L (equivalently, by simple dimensions).
    """
    P = free_product([A])
    cyclic = {}
    for L in left_ideals(A, range(1, min(A.dim, dmax) + 1), budget):
        e = A.dim - L.dim
        if 1 <= e <= dmax and e not in cyclic:
            cyclic[e] = cyclic_quotient_rep(A, L, P)
    achievable = {0: []}
    for e in range(1, dmax + 1):
        for c in sorted(cyclic):
            if c <= e and (e - c) in achievable:
                achievable[e] = achievable[e - c] + [c]
                break
    witnesses = {}
    for e, parts in achievable.items():
        if e == 0:
            continue
        rep = cyclic[parts[0]]
        for c in parts[1:]:
            rep = rep.direct_sum(cyclic[c])
        witnesses[e] = rep
    return set(achievable) - {0}, witnesses


def vanishing_check(family, d: int, budget=None) -> bool:
    """True iff no nonzero joint comodule of dimension <= d exists."""
    return joint_witness(family, d, budget) is None


def joint_witness(family, d: int, budget=None) -> Optional[JointComodule]:
    """A joint comodule of least dimension <= d, or None.

    Per factor, the achievable module dimensions are computed from cyclic
    quotients of the dual algebra; a common dimension yields a block-sum
    witness, re-validated before returning.
    """
    family = tuple(family)
    if not family:
        raise FieldError("empty family; use the trivial coalgebra explicitly")
    if not family[0].field.is_finite:
        raise FieldError("vanishing analysis needs a finite field family")
    algebras = [dual_algebra(C) for C in family]
    dims_and_wits = [_module_dims_of_factor(A, d, budget) for A in algebras]
    common = set(range(1, d + 1))
    for dims, _ in dims_and_wits:
        common &= dims
    if not common:
        return None
    e = min(common)
    P = family_presentation(family)
    mats = [None] * P.n_generators
    for fi, (dims, wits) in enumerate(dims_and_wits):
        w = wits[e]
        for (sym, k), M in zip(P.factor_gens[fi], w.mats):
            mats[sym - 1] = M
    rep = Representation(P, e, mats)
    joint = JointComodule.from_rep(rep)
    if not joint.validate():
        raise RuntimeError("witness failed validation")
    return joint


# ---------------------------------------------------------------------------
# truncated products


class TruncatedProduct:
    """Degree-d product approximation: carrier, projections, provenance."""

    def __init__(self, family, degree, carrier, projections, provenance, route, notes=""):
        self.family = tuple(family)
        self.degree = degree
        self.carrier = carrier
        self.projections = list(projections)
        self.provenance = list(provenance)
        self.route = route
        self.notes = notes

    def validate(self) -> bool:
        if self.carrier.dim and not validate_coalgebra(self.carrier):
            return False
        for C, M in zip(self.family, self.projections):
            if self.carrier.dim == 0:
                continue
            if not is_coalgebra_morphism(self.carrier, C, M):
                return False
        return True

    def to_json(self):
        return {
            "family": [C.to_json() for C in self.family],
            "d": self.degree,
            "carrier_dim": self.carrier.dim,
            "carrier": self.carrier.to_json(),
            "route": self.route,
            "notes": self.notes,
            "witnesses": [r.to_json() for r in self.provenance],
        }


def _zero_coalgebra(F: Field) -> Coalgebra:
    return Coalgebra(F, 0, {}, ())


class _ExactImageProvider:
    """Joint image algebra of an explicit representation list, exact arithmetic."""

    def __init__(self, P: PresentedAlgebra, reps):
        from .presented import _symbols_of, joint_stabilization_length

        self.P = P
        self.reps = list(reps)
        F = P.field
        self.field = F
        symbols = _symbols_of(P)
        width = max(sum(r.dim * r.dim for r in self.reps), 1)

        def tuple_vec(mats):
            out = []
            for M in mats:
                for row in M.rows:
                    out.extend(row)
            return tuple(out) if out else (F.zero(),)

        idents = [Matrix.identity(F, r.dim) for r in self.reps]
        self.basis_words = [()]
        self.word_mats = [idents]
        self._vectors = [tuple_vec(idents)]
        space = Subspace.from_vectors(F, width, self._vectors)
        frontier = [0]
        while frontier:
            new_frontier = []
            for t in frontier:
                for sym in symbols:
                    mats = [
                        M.mul(r.matrix_of_symbol(sym))
                        for M, r in zip(self.word_mats[t], self.reps)
                    ]
                    v = tuple_vec(mats)
                    if not space.contains(v):
                        self.basis_words.append(self.basis_words[t] + (sym,))
                        self.word_mats.append(mats)
                        self._vectors.append(v)
                        space = Subspace.from_vectors(F, width, self._vectors)
                        new_frontier.append(len(self.basis_words) - 1)
            frontier = new_frontier
        self._width = width
        self.provenance = list(self.reps)

    @property
    def dim(self):
        return len(self.basis_words) if self.reps else 0

    def _coords(self, vec):
        F = self.field
        stacked = Matrix(F, self._vectors + [vec]).transpose()
        ker = stacked.kernel()
        for lam in ker.basis:
            if not F.is_zero(lam[-1]):
                inv = F.neg(F.inv(lam[-1]))
                return tuple(F.mul(inv, c) for c in lam[:-1])
        raise RuntimeError("element escaped the image algebra span")

    def _tuple_vec(self, mats):
        F = self.field
        out = []
        for M in mats:
            for row in M.rows:
                out.extend(row)
        return tuple(out) if out else (F.zero(),)

    def mult_coords(self, t, r):
        mats = [A.mul(B) for A, B in zip(self.word_mats[t], self.word_mats[r])]
        return self._coords(self._tuple_vec(mats))

    def element_coords(self, fi, vec):
        """Coords of a factor element given by dual-algebra coordinates."""
        P = self.P
        F = self.field
        mats = []
        for rep_idx, rep in enumerate(self.reps):
            acc = Matrix.zero(F, rep.dim, rep.dim)
            k0, unit = P.factor_unit_data[fi]
            gen_of_basis = {k: sym for sym, k in P.factor_gens[fi]}
            # e_k0 = (1 - sum u_k e_k)/u_k0
            base = {}
            for k in range(P.factors[fi].dim):
                if k == k0:
                    M = Matrix.identity(F, rep.dim)
                    for kk, sym in gen_of_basis.items():
                        M = M.sub(rep.mats[sym - 1].scale(unit[kk]))
                    base[k] = M.scale(F.inv(unit[k0]))
                else:
                    base[k] = rep.mats[gen_of_basis[k] - 1]
            for k, c in enumerate(vec):
                if not F.is_zero(c):
                    acc = acc.add(base[k].scale(c))
            mats.append(acc)
        return self._coords(self._tuple_vec(mats))


class _CodedImageProvider:
    """Adapter exposing a fastrep ImageAlgebra to the carrier builder."""

    def __init__(self, image):
        self.image = image
        self.P = image.P
        self.field = image.P.field
        self.cd = image.cd
        self.basis_words = image.basis_words
        self.provenance = list(image.active_exact)

    @property
    def dim(self):
        return self.image.dim

    def mult_coords(self, t, r):
        cd = self.cd
        mats = [
            cd.matmul(A, B)
            for A, B in zip(self.image.word_mats[t], self.image.word_mats[r])
        ]
        coords = self.image.element_coords(mats)
        if coords is None:
            raise RuntimeError("product escaped the image algebra span")
        return tuple(cd.decode(c) for c in coords)

    def element_coords(self, fi, vec):
        import numpy as np

        P, cd, F = self.P, self.cd, self.field
        mats = []
        for rep, e in zip(self.image.active, self.image.active_dims):
            k0, unit = P.factor_unit_data[fi]
            gen_of_basis = {k: sym for sym, k in P.factor_gens[fi]}
            base = {}
            ident = cd.identity_mat(e)
            for k in range(P.factors[fi].dim):
                if k == k0:
                    M = ident.copy()
                    for kk, sym in gen_of_basis.items():
                        coeff = cd.encode(F.neg(unit[kk]))
                        M = (M + np.einsum("iju,v,uvw->ijw", rep[sym], coeff, cd.mul_tensor)) % cd.p
                    inv = cd.encode(F.inv(unit[k0]))
                    base[k] = np.einsum("iju,v,uvw->ijw", M, inv, cd.mul_tensor) % cd.p
                else:
                    base[k] = rep[gen_of_basis[k]]
            acc = np.zeros((e, e, cd.s), dtype="int64")
            for k, c in enumerate(vec):
                if not F.is_zero(c):
                    cc = cd.encode(c)
                    acc = (acc + np.einsum("iju,v,uvw->ijw", base[k], cc, cd.mul_tensor)) % cd.p
            mats.append(acc)
        coords = self.image.element_coords(mats)
        if coords is None:
            raise RuntimeError("factor element escaped the image algebra span")
        return tuple(self.cd.decode(c) for c in coords)


def _carrier_from_provider(provider, family, degree, route, notes="") -> TruncatedProduct:
    F = provider.field
    D = provider.dim
    if D == 0:
        carrier = _zero_coalgebra(F)
        projections = [Matrix.zero(F, C.dim, 0) for C in family]
        return TruncatedProduct(family, degree, carrier, projections, [], route, notes)
    delta = {}
    for t in range(D):
        for r in range(D):
            coords = provider.mult_coords(t, r)
            for s, c in enumerate(coords):
                if not F.is_zero(c):
                    delta[(s, t, r)] = c
    counit = tuple(F.one() if s == 0 else F.zero() for s in range(D))
    labels = ["c[" + ".".join(str(x) for x in w) + "]" if w else "c[1]" for w in provider.basis_words]
    carrier = Coalgebra(F, D, delta, counit, labels)
    rep = validate_coalgebra(carrier)
    if not rep:
        raise RuntimeError(f"carrier failed validation: {rep.message}")
    projections = []
    for fi, C in enumerate(family):
        rows = []
        for k in range(C.dim):
            basis = tuple(F.one() if t == k else F.zero() for t in range(C.dim))
            rows.append(provider.element_coords(fi, basis))
        P_i = Matrix(F, rows)
        projections.append(P_i)
    out = TruncatedProduct(family, degree, carrier, projections, provider.provenance, route, notes)
    if not out.validate():
        raise RuntimeError("projections are not coalgebra morphisms")
    return out


def _effective_factors(family):
    return [i for i, C in enumerate(family) if C.dim > 1]


def truncated_product(family, d: int, budget=None, supplied=None) -> TruncatedProduct:
    """Degree-d truncation of the coalgebra product of the family.

    Routes: an explicit joint-comodule list (any field, labeled output); a
    single effective factor (cyclic-quotient accumulation, no enumeration);
    otherwise batched enumeration over a finite field.
    """
    family = tuple(family)
    if d < 1:
        raise FieldError("degree bound must be >= 1")
    if not family:
        raise FieldError("empty family; use the trivial coalgebra explicitly")
    F = family[0].field
    for C in family:
        if C.field != F:
            raise FieldError("family members must share their field")
    P = family_presentation(family)
    if supplied is not None:
        reps = [joint_to_rep(J, P) if isinstance(J, JointComodule) else J for J in supplied]
        for r in reps:
            if r.dim > d:
                raise FieldError("supplied comodule exceeds the degree bound")
        provider = _ExactImageProvider(P, reps)
        return _carrier_from_provider(
            provider, family, d, "supplied",
            notes="relative to supplied comodules",
        )
    if not F.is_finite:
        raise FieldError(
            "enumeration needs a finite field; pass supplied= joint comodules instead"
        )
    effective = _effective_factors(family)
    if len(effective) <= 1:
        reps = _single_factor_reps(family, P, effective, d, budget)
        provider = _ExactImageProvider(P, reps)
        return _carrier_from_provider(provider, family, d, "finite-dimensional factor")
    from .fastrep import truncated_image_algebra

    allowed = _joint_dims(P, d, budget)
    image, _profile = truncated_image_algebra(P, d, budget, allowed)
    provider = _CodedImageProvider(image)
    return _carrier_from_provider(provider, family, d, "enumeration")


def _joint_dims(P: PresentedAlgebra, d: int, budget=None):
    """Dimensions <= d where joint structures can exist: the intersection of
    the factors' achievable module dimensions."""
    common = set(range(1, d + 1))
    for A in P.factors:
        dims, _ = _module_dims_of_factor(A, d, budget)
        common &= dims
    return common


def _single_factor_reps(family, P, effective, d, budget):
    """Kernel-complete cyclic-quotient representations for a single factor."""
    F = family[0].field
    if not effective:
        return [Representation(P, 1, [], check=False)]
    fi = effective[0]
    A = P.factors[fi]
    reps = []
    seen_ann = None
    for L in left_ideals(A, range(1, min(A.dim, d) + 1), budget):
        rep = cyclic_quotient_rep(A, L, P)
        ann = _annihilator(A, L)
        if seen_ann is None:
            reps.append(rep)
            seen_ann = ann
        else:
            inter = seen_ann.intersect(ann)
            if inter.dim < seen_ann.dim:
                reps.append(rep)
                seen_ann = inter
    return reps


def _annihilator(A: FinAlgebra, L: Subspace) -> Subspace:
    """ann(A/L) = {a : a*A <= L} as a subspace of A."""
    F = A.field
    n = A.dim
    # condition matrix: for each basis b_j, the residual of a*b_j mod L
    cond_rows = []
    for a_idx in range(n):
        row_block = []
        for j in range(n):
            prod = A.product_vec(A.basis_vec(a_idx), A.basis_vec(j))
            row_block.extend(L.reduce(prod))
        cond_rows.append(row_block)
    M = Matrix(F, cond_rows).transpose()
    return M.kernel()


def dimension_profile(family, dmax: int, budget=None, supplied=None):
    """Carrier dimensions for d = 1..dmax, with growth evidence.

    The profile is nondecreasing; strict growth across the whole window is
    reported as infinite-dimensionality evidence (never as a proved claim).
    """
    family = tuple(family)
    if dmax < 1:
        raise FieldError("dmax must be >= 1")
    F = family[0].field
    dims = []
    if supplied is not None:
        for d in range(1, dmax + 1):
            sub = [J for J in supplied if J.dim <= d]
            if not sub:
                dims.append(0)
                continue
            dims.append(truncated_product(family, d, budget, supplied=sub).carrier.dim)
        note = "relative to supplied comodules"
    elif len(_effective_factors(family)) <= 1 or not F.is_finite:
        for d in range(1, dmax + 1):
            dims.append(truncated_product(family, d, budget).carrier.dim)
        note = ""
    else:
        from .fastrep import truncated_image_algebra

        P = family_presentation(family)
        allowed = _joint_dims(P, dmax, budget)
        _, dims = truncated_image_algebra(P, dmax, budget, allowed)
        note = ""
    strictly_increasing = all(b > a for a, b in zip(dims, dims[1:]))
    evidence = (
        "strict growth through d=%d: infinite-dimensionality evidence" % dmax
        if strictly_increasing and len(dims) > 1
        else ""
    )
    return ProfileReport(family, dmax, dims, evidence, note)


class ProfileReport:
    def __init__(self, family, dmax, dims, evidence, note=""):
        self.family = tuple(family)
        self.dmax = dmax
        self.dims = list(dims)
        self.evidence = evidence
        self.note = note

    def to_json(self):
        return {
            "dmax": self.dmax,
            "profile": self.dims,
            "evidence": self.evidence,
            "notes": self.note,
        }


# ---------------------------------------------------------------------------
# extension commutation


class ExtensionCommutationReport:
    def __init__(self, family, embedding, degree, dim_source, dim_extended, comparison, equal):
        self.family = tuple(family)
        self.embedding = embedding
        self.degree = degree
        self.dim_source = dim_source
        self.dim_extended = dim_extended
        self.comparison = comparison  # Matrix mapping source functionals into the extended carrier
        self.equal = equal

    def to_json(self):
        F = self.embedding.target
        return {
            "d": self.degree,
            "dim_source_extended": self.dim_source,
            "dim_extended_family": self.dim_extended,
            "equal": self.equal,
            "comparison_rank": self.comparison.rank() if self.comparison is not None else None,
        }


def extension_commutation_report(family, e: Embedding, d: int, budget=None):
    """Compare trunc_d of the family, extended, against trunc_d of the
    extended family; exhibits the comparison map on coefficient functionals."""
    family = tuple(family)
    if family[0].field != e.source:
        raise FieldError("family is not over the embedding source")
    if not (e.target.is_finite and e.source.is_finite):
        raise FieldError(
            "only finite embeddings are supported here; see the extension-lab "
            "witnesses for the transcendental regime"
        )
    from .coalgebra import scalar_extend_coalgebra

    src = truncated_product(family, d, budget)
    ext_family = [scalar_extend_coalgebra(C, e) for C in family]
    tgt = truncated_product(ext_family, d, budget)
    comparison = _comparison_map(src, tgt, e)
    equal = src.carrier.dim == tgt.carrier.dim
    return ExtensionCommutationReport(
        family, e, d, src.carrier.dim, tgt.carrier.dim, comparison, equal
    )


def _comparison_map(src: TruncatedProduct, tgt: TruncatedProduct, e: Embedding):
    """Matrix of the canonical injection of extended source functionals.

    Source basis functional f_s evaluates on the target's basis words; the
    resulting (D_src x D_tgt) matrix has full row rank D_src.
    """
    if src.carrier.dim == 0 or tgt.carrier.dim == 0:
        return None
    K = e.target
    src_words = [_word_label_to_word(lbl) for lbl in src.carrier.labels]
    tgt_words = [_word_label_to_word(lbl) for lbl in tgt.carrier.labels]
    # evaluate source functionals on target basis words via the extended
    # source provenance representations
    ext_reps = []
    for r in src.provenance:
        from .linalg import scalar_extend_matrix

        mats = [scalar_extend_matrix(M, e) for M in r.mats]
        ext_reps.append((mats, r.dim))
    # coords of a word in the extended source image-algebra basis
    width = max(sum(dim * dim for _, dim in ext_reps), 1)

    def tuple_of(word):
        out = []
        for mats, dim in ext_reps:
            M = Matrix.identity(K, dim)
            for sym in word:
                M = M.mul(mats[sym - 1])
            for row in M.rows:
                out.extend(row)
        return tuple(out) if out else (K.zero(),)

    basis_vecs = [tuple_of(w) for w in src_words]
    rows = []
    for w in tgt_words:
        stacked = Matrix(K, basis_vecs + [tuple_of(w)]).transpose()
        ker = stacked.kernel()
        coeffs = None
        for lam in ker.basis:
            if not K.is_zero(lam[-1]):
                inv = K.neg(K.inv(lam[-1]))
                coeffs = tuple(K.mul(inv, c) for c in lam[:-1])
                break
        if coeffs is None:
            raise RuntimeError("target word escaped the extended source span")
        rows.append(coeffs)
    return Matrix(K, rows).transpose()


def _word_label_to_word(label: str):
    inner = label[2:-1]
    if inner == "1":
        return ()
    return tuple(int(x) for x in inner.split("."))
