"""Finitely presented algebras and their finite-dimensional representations.

Words are tuples of signed 1-based symbol indices: +i is generator i-1,
-i its formal inverse (only for generators flagged invertible).  A relation
is a tuple of (coefficient, word) terms, implicitly set to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from . import budget as budget_mod
from .coalgebra import Coalgebra, FinAlgebra, dual_coalgebra
from .fields import Field, FieldError
from .linalg import Matrix, Subspace


@dataclass(frozen=True)
class Generator:
    name: str
    invertible: bool = False


class PresentedAlgebra:
    """Generators plus noncommutative polynomial relations over a field.

    Inverse relations s*s^-1 - 1 and s^-1*s - 1 for invertible generators
    are implicit members of the relation list (added at construction).
    """

    def __init__(self, field: Field, generators, relations=()):
        self.field = field
        self.generators = tuple(
            g if isinstance(g, Generator) else Generator(*g) for g in generators
        )
        rels = [self._check_relation(r) for r in relations]
        for idx, g in enumerate(self.generators):
            if g.invertible:
                s = idx + 1
                one = field.one()
                rels.append(((one, (s, -s)), (field.neg(one), ())))
                rels.append(((one, (-s, s)), (field.neg(one), ())))
        self.relations = tuple(rels)
        # metadata filled in by free_product
        self.factors = None
        self.factor_gens = None
        self.factor_unit_data = None

    def _check_relation(self, rel):
        out = []
        for coeff, word in rel:
            word = tuple(word)
            for s in word:
                idx = abs(s) - 1
                if s == 0 or idx >= len(self.generators):
                    raise FieldError(f"relation uses undeclared symbol {s}")
                if s < 0 and not self.generators[idx].invertible:
                    raise FieldError(
                        f"inverse symbol for non-invertible generator {self.generators[idx].name}"
                    )
            out.append((coeff, word))
        return tuple(out)

    @property
    def n_generators(self):
        return len(self.generators)

    def gen_index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def __repr__(self):
        names = ",".join(g.name + ("^±1" if g.invertible else "") for g in self.generators)
        return f"PresentedAlgebra<{names}; {len(self.relations)} relations>"

    def to_json(self):
        F = self.field
        return {
            "field": F.desc.to_json(),
            "generators": [{"name": g.name, "invertible": g.invertible} for g in self.generators],
            "relations": [
                [[F.to_str(c), list(w)] for c, w in rel] for rel in self.relations
            ],
        }

    @staticmethod
    def from_json(obj, field: Optional[Field] = None) -> "PresentedAlgebra":
        from .fields import FieldDescriptor, make_field

        F = field if field is not None else make_field(FieldDescriptor.from_json(obj["field"]))
        gens = [Generator(g["name"], bool(g.get("invertible", False))) for g in obj["generators"]]
        rels = [
            tuple((F.from_str(c), tuple(w)) for c, w in rel) for rel in obj["relations"]
        ]
        # the auto-added inverse laws were serialized too; drop them before rebuild
        auto = set(PresentedAlgebra(F, gens, ()).relations)
        rels = [r for r in rels if r not in auto]
        return PresentedAlgebra(F, gens, rels)


# ---------------------------------------------------------------------------
# constructors


def free_algebra(field: Field, m: int, names: Optional[Sequence[str]] = None) -> PresentedAlgebra:
    if m < 0:
        raise FieldError("generator count must be >= 0")
    if names is None:
        names = [f"x{i + 1}" for i in range(m)] if m > 1 else ["x"] * m
    return PresentedAlgebra(field, [Generator(n) for n in names])


def free_product(factors: Sequence[FinAlgebra]) -> PresentedAlgebra:
    """Present the coproduct of finite-dimensional algebras.

    Generators are the non-unit basis elements of each factor (the basis is
    completed so the unit is a basis vector); relations rewrite each
    factor's multiplication table over its own generators.
    """
    factors = list(factors)
    if not factors:
        raise FieldError("free product of an empty family; use the trivial factor explicitly")
    F = factors[0].field
    gens: list[Generator] = []
    factor_gens = []
    factor_unit_data = []
    relations = []
    for fi, A in enumerate(factors):
        if A.field != F:
            raise FieldError("free product factors must share their field")
        rep = A.validate()
        if not rep:
            raise FieldError(f"factor {fi} is not a valid algebra: {rep.message}")
        k0 = max(k for k in range(A.dim) if not F.is_zero(A.unit[k]))
        u0 = A.unit[k0]
        local = []  # (generator symbol index 1-based, factor basis index)
        for k in range(A.dim):
            if k == k0:
                continue
            name = (A.labels[k] if A.labels else f"a{k}") + (f"_{fi}" if len(factors) > 1 else "")
            gens.append(Generator(name))
            local.append((len(gens), k))
        factor_gens.append(tuple(local))
        factor_unit_data.append((k0, A.unit))

        def completed_coords(vec, k0=k0, u0=u0, A=A):
            one_coeff = F.div(vec[k0], u0)
            rest = {
                k: F.sub(vec[k], F.mul(one_coeff, A.unit[k]))
                for k in range(A.dim)
                if k != k0
            }
            return one_coeff, rest

        sym_of_basis = {k: s for s, k in local}
        for (ka, kb) in product([k for k in range(A.dim) if k != k0], repeat=2):
            prod_vec = A.product_vec(A.basis_vec(ka), A.basis_vec(kb))
            one_coeff, rest = completed_coords(prod_vec)
            terms = [(F.one(), (sym_of_basis[ka], sym_of_basis[kb]))]
            if not F.is_zero(one_coeff):
                terms.append((F.neg(one_coeff), ()))
            for k, c in rest.items():
                if not F.is_zero(c):
                    terms.append((F.neg(c), (sym_of_basis[k],)))
            relations.append(tuple(terms))
    P = PresentedAlgebra(F, gens, relations)
    P.factors = tuple(factors)
    P.factor_gens = tuple(factor_gens)
    P.factor_unit_data = tuple(factor_unit_data)
    return P


def presentation_of(A: FinAlgebra) -> PresentedAlgebra:
    """Unit-completed presentation of a single finite-dimensional algebra."""
    return free_product([A])


# ---------------------------------------------------------------------------
# representations


class Representation:
    """Matrices for the base generators; inverse symbols resolve to inverses."""

    def __init__(self, presentation: PresentedAlgebra, dim: int, mats, check=True):
        self.presentation = presentation
        self.dim = dim
        self.mats = tuple(mats)
        if len(self.mats) != presentation.n_generators:
            raise FieldError("one matrix per generator required")
        self.inv_mats = []
        for g, M in zip(presentation.generators, self.mats):
            if g.invertible:
                inv = M.inverse()
                if inv is None:
                    raise FieldError(f"generator {g.name} mapped to a singular matrix")
                self.inv_mats.append(inv)
            else:
                self.inv_mats.append(None)
        self.inv_mats = tuple(self.inv_mats)
        if check and not self.satisfies_relations():
            raise FieldError("relations violated")

    def matrix_of_symbol(self, s: int) -> Matrix:
        if s > 0:
            return self.mats[s - 1]
        M = self.inv_mats[-s - 1]
        if M is None:
            raise FieldError("inverse of a non-invertible generator")
        return M

    def evaluate_word(self, word) -> Matrix:
        acc = Matrix.identity(self.presentation.field, self.dim)
        for s in word:
            acc = acc.mul(self.matrix_of_symbol(s))
        return acc

    def evaluate_relation(self, rel) -> Matrix:
        F = self.presentation.field
        acc = Matrix.zero(F, self.dim, self.dim)
        for coeff, word in rel:
            acc = acc.add(self.evaluate_word(word).scale(coeff))
        return acc

    def satisfies_relations(self) -> bool:
        return all(self.evaluate_relation(r).is_zero() for r in self.presentation.relations)

    def sort_key(self):
        order = _element_order(self.presentation.field)
        return tuple(order[x] for M in self.mats for row in M.rows for x in row)

    def conjugate(self, T: Matrix) -> "Representation":
        Tinv = T.inverse()
        if Tinv is None:
            raise FieldError("conjugation by a singular matrix")
        return Representation(
            self.presentation, self.dim, [T.mul(M).mul(Tinv) for M in self.mats]
        )

    def direct_sum(self, other: "Representation") -> "Representation":
        if other.presentation is not self.presentation:
            raise FieldError("direct sum requires the same presentation")
        F = self.presentation.field
        n, m = self.dim, other.dim
        mats = []
        for A, B in zip(self.mats, other.mats):
            rows = []
            for i in range(n):
                rows.append(list(A.rows[i]) + [F.zero()] * m)
            for i in range(m):
                rows.append([F.zero()] * n + list(B.rows[i]))
            mats.append(Matrix(F, rows))
        return Representation(self.presentation, n + m, mats)

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and other.presentation is self.presentation
            and other.mats == self.mats
        )

    def __hash__(self):
        return hash(self.mats)

    def __repr__(self):
        return f"Representation(dim {self.dim} of {self.presentation!r})"

    def to_json(self):
        F = self.presentation.field
        return {
            "dim": self.dim,
            "matrices": {
                g.name: [[F.to_str(x) for x in row] for row in M.rows]
                for g, M in zip(self.presentation.generators, self.mats)
            },
        }

    @staticmethod
    def from_json(obj, presentation: PresentedAlgebra) -> "Representation":
        F = presentation.field
        mats = []
        for g in presentation.generators:
            rows = obj["matrices"][g.name]
            mats.append(Matrix(F, [[F.from_str(x) for x in row] for row in rows]))
        return Representation(presentation, int(obj["dim"]), mats)


def _element_order(F: Field):
    cache = getattr(F, "_element_order_cache", None)
    if cache is None:
        cache = {x: i for i, x in enumerate(F.elements())}
        F._element_order_cache = cache
    return cache


# ---------------------------------------------------------------------------
# enumeration


def _relation_components(P: PresentedAlgebra):
    """Partition generator indices into relation-connected components."""
    n = P.n_generators
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for rel in P.relations:
        seen = sorted({abs(s) - 1 for _, w in rel for s in w})
        for a, b in zip(seen, seen[1:]):
            union(a, b)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return [sorted(v) for _, v in sorted(comps.items())]


def _elimination_plan(P: PresentedAlgebra, comp):
    """Greedy rewriting g := expression for generators pinned by a relation.

    A relation eliminates g when it has exactly one length-1 occurrence of g
    (unit coefficient group), g is not invertible, and g appears nowhere
    else in the relation.  Cyclic definitions fall back to free enumeration.
    """
    F = P.field
    comp_set = set(comp)
    defs = {}
    for rel in P.relations:
        gens_here = {abs(s) - 1 for _, w in rel for s in w}
        if not gens_here <= comp_set:
            continue
        for coeff, word in rel:
            if len(word) != 1 or word[0] < 0:
                continue
            g = word[0] - 1
            if g in defs or P.generators[g].invertible:
                continue
            others = [(c, w) for c, w in rel if w != word or not F.eq(c, coeff)]
            # reject if g occurs in any other term (including repeats of (coeff,word))
            occurs = sum(1 for c, w in rel for s in w if abs(s) - 1 == g)
            if occurs != 1:
                continue
            others = [(c, w) for c, w in rel if (c, w) != (coeff, word)]
            inv = F.inv(coeff)
            expr = tuple((F.neg(F.mul(inv, c)), w) for c, w in others)
            defs[g] = expr
            break
    # drop cyclic definitions, in index order
    changed = True
    while changed:
        changed = False
        resolved = set()
        for _ in range(len(defs) + 1):
            progress = False
            for g, expr in defs.items():
                if g in resolved:
                    continue
                used = {abs(s) - 1 for _, w in expr for s in w}
                if all(u not in defs or u in resolved for u in used):
                    resolved.add(g)
                    progress = True
            if not progress:
                break
        stuck = [g for g in sorted(defs) if g not in resolved]
        if stuck:
            del defs[stuck[0]]
            changed = True
    free = [g for g in comp if g not in defs]
    return free, defs


def _eval_expression(F, expr, dim, assigned):
    acc = Matrix.zero(F, dim, dim)
    for coeff, word in expr:
        M = Matrix.identity(F, dim)
        for s in word:
            if s < 0:
                raise FieldError("inverse symbol in an elimination expression")
            M = M.mul(assigned[s - 1])
        acc = acc.add(M.scale(coeff))
    return acc


def _all_matrices(F, d):
    """All d x d matrices in lexicographic element order."""
    elems = list(F.elements())
    for flat in product(elems, repeat=d * d):
        yield Matrix(F, [flat[i * d : (i + 1) * d] for i in range(d)])


def enumerate_component_solutions(P: PresentedAlgebra, comp, d, budget=None):
    """All assignments for one relation-component, in lexicographic order."""
    F = P.field
    free, defs = _elimination_plan(P, comp)
    q = F.order
    budget_mod.check(q ** (len(free) * d * d), budget, "representation enumeration")
    rels = [
        r
        for r in P.relations
        if {abs(s) - 1 for _, w in r for s in w} <= set(comp) and r
    ]
    solutions = []
    eval_order = _definition_order(defs)
    for combo in product(*[_all_matrices(F, d) for _ in free]):
        assigned = {}
        for g, M in zip(free, combo):
            assigned[g] = M
        ok = True
        for g in eval_order:
            assigned[g] = _eval_expression(F, defs[g], d, assigned)
        # invertible generators: solve inverses, skip singular assignments
        invs = {}
        for g in comp:
            if P.generators[g].invertible:
                inv = assigned[g].inverse()
                if inv is None:
                    ok = False
                    break
                invs[g] = inv
        if not ok:
            continue
        for rel in rels:
            if not _relation_holds(F, rel, d, assigned, invs):
                ok = False
                break
        if ok:
            solutions.append({g: assigned[g] for g in comp})
    return solutions


def _definition_order(defs):
    order = []
    resolved = set()
    pending = dict(defs)
    while pending:
        progress = False
        for g in sorted(pending):
            used = {abs(s) - 1 for _, w in pending[g] for s in w}
            if all(u not in pending or u in resolved for u in used):
                order.append(g)
                resolved.add(g)
                del pending[g]
                progress = True
                break
        if not progress:
            raise RuntimeError("cyclic elimination plan")
    return order


def _relation_holds(F, rel, d, assigned, invs):
    acc = Matrix.zero(F, d, d)
    for coeff, word in rel:
        M = Matrix.identity(F, d)
        for s in word:
            M = M.mul(assigned[s - 1] if s > 0 else invs[-s - 1])
        acc = acc.add(M.scale(coeff))
    return acc.is_zero()


def enumerate_representations(P: PresentedAlgebra, d: int, budget=None):
    """Every representation of dimension exactly d, lexicographically sorted.

    The workload is counted per relation-component (q^(free_gens * d^2) each)
    and against the size of the solution product; exceeding the budget raises
    BudgetExceeded with the required count.
    """
    if not P.field.is_finite:
        raise FieldError("representation enumeration needs a finite field")
    if d < 1:
        raise FieldError("dimension must be >= 1")
    comps = _relation_components(P)
    if not comps:
        return [Representation(P, d, [])]
    q = P.field.order
    total_work = 0
    for comp in comps:
        free, _ = _elimination_plan(P, comp)
        total_work += q ** (len(free) * d * d)
    budget_mod.check(total_work, budget, "representation enumeration")
    per_comp = [enumerate_component_solutions(P, comp, d, budget) for comp in comps]
    count = 1
    for sols in per_comp:
        count *= max(len(sols), 1)
    budget_mod.check(count, budget, "representation stream")
    out = []
    for combo in product(*per_comp):
        assigned = {}
        for sol in combo:
            assigned.update(sol)
        mats = [assigned[g] for g in range(P.n_generators)]
        out.append(Representation(P, d, mats, check=False))
    out.sort(key=Representation.sort_key)
    return out


def partition_representations(P: PresentedAlgebra, d: int, parts: int, budget=None):
    """Deterministic split of the enumeration stream into `parts` chunks.

    The union of the chunks, re-sorted, equals enumerate_representations;
    consumers may process chunks in parallel and re-canonicalize afterwards.
    """
    reps = enumerate_representations(P, d, budget)
    return [reps[i::parts] for i in range(parts)]


# ---------------------------------------------------------------------------
# simplicity and isomorphism


def _line_representatives(F, d):
    # vectors with first nonzero coordinate 1, in lexicographic order
    elems = list(F.elements())
    zero, one = F.zero(), F.one()
    for lead in range(d):
        for tail in product(elems, repeat=d - lead - 1):
            yield tuple([zero] * lead + [one] + list(tail))


def spin(rep: Representation, vector) -> Subspace:
    """Smallest invariant subspace containing the vector."""
    F = rep.presentation.field
    d = rep.dim
    action = list(rep.mats) + [M for M in rep.inv_mats if M is not None]
    space = Subspace.from_vectors(F, d, [vector])
    frontier = list(space.basis)
    while frontier:
        new_frontier = []
        for v in frontier:
            for M in action:
                w = M.apply_vec(v)
                if not space.contains(w):
                    space = Subspace.from_vectors(F, d, list(space.basis) + [w])
                    new_frontier.append(w)
        frontier = new_frontier
    return space


def is_simple(rep: Representation) -> bool:
    """No proper nonzero invariant subspace; certified by spinning every line."""
    if not rep.satisfies_relations():
        raise FieldError("invalid representation")
    d = rep.dim
    if d == 1:
        return True
    F = rep.presentation.field
    if not F.is_finite:
        raise FieldError("simplicity test needs a finite field")
    for v in _line_representatives(F, d):
        if spin(rep, v).dim != d:
            return False
    return True


def intertwiner_space(r: Representation, s: Representation):
    """Basis of {T : T r(g) = s(g) T for all generators}, as d x d matrices."""
    if r.presentation is not s.presentation and r.presentation.to_json() != s.presentation.to_json():
        raise FieldError("intertwiners need the same presentation")
    F = r.presentation.field
    dr, ds = r.dim, s.dim
    rows = []
    # unknowns T[a,b] with a < ds, b < dr, flattened a*dr + b
    for A, B in zip(r.mats, s.mats):
        for i in range(ds):
            for j in range(dr):
                row = [F.zero()] * (ds * dr)
                for k in range(dr):
                    row[i * dr + k] = F.add(row[i * dr + k], A.rows[k][j])
                for k in range(ds):
                    row[k * dr + j] = F.sub(row[k * dr + j], B.rows[i][k])
                rows.append(row)
    if not rows:
        ker = Subspace.full(F, ds * dr)
    else:
        ker = Matrix(F, rows).kernel()
    return [
        Matrix(F, [vec[i * dr : (i + 1) * dr] for i in range(ds)]) for vec in ker.basis
    ]


def are_isomorphic(r: Representation, s: Representation, budget=None) -> bool:
    """Equivalence of representations via the intertwiner space.

    Decision ladder: zero space, Hom-dimension mismatches, invertible basis
    element, exhaustive combination search (within budget), then a symbolic
    determinant polynomial (nonzero iff an invertible intertwiner exists over
    some extension, which reflects to the base field), then seeded sampling.
    """
    if r.dim != s.dim:
        return False
    F = r.presentation.field
    d = r.dim
    H = intertwiner_space(r, s)
    if not H:
        return False
    for T in H:
        if T.inverse() is not None:
            return True
    t = len(H)
    h_back = len(intertwiner_space(s, r))
    e_r = len(intertwiner_space(r, r))
    e_s = len(intertwiner_space(s, s))
    if not (t == h_back == e_r == e_s):
        return False
    if F.is_finite and F.order ** t <= 1 << 16:
        elems = list(F.elements())
        for combo in product(elems, repeat=t):
            T = Matrix.zero(F, d, d)
            for c, B in zip(combo, H):
                T = T.add(B.scale(c))
            if T.inverse() is not None:
                return True
        return False
    if t <= 8 and d <= 6:
        return _det_poly_nonzero(F, H, d)
    if F.is_finite:
        import random

        rng = random.Random(hash((r.sort_key(), s.sort_key())) & 0xFFFFFFFF)
        elems = list(F.elements())
        for _ in range(500):
            T = Matrix.zero(F, d, d)
            for B in H:
                T = T.add(B.scale(rng.choice(elems)))
            if T.inverse() is not None:
                return True
    raise budget_mod.BudgetExceeded(F.order ** t if F.is_finite else -1,
                                    budget_mod.resolve(budget), "isomorphism search")


def _det_poly_nonzero(F, H, d):
    """det(sum l_i T_i) as a polynomial in l; nonzero iff representations are
    isomorphic (invertible intertwiners exist over an extension and module
    isomorphy descends along field extensions)."""
    t = len(H)

    def padd_(P1, P2):
        out = dict(P1)
        for k, v in P2.items():
            w = F.add(out.get(k, F.zero()), v)
            if F.is_zero(w):
                out.pop(k, None)
            else:
                out[k] = w
        return out

    def pmul_(P1, P2):
        out = {}
        for k1, v1 in P1.items():
            for k2, v2 in P2.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                w = F.add(out.get(k, F.zero()), F.mul(v1, v2))
                if F.is_zero(w):
                    out.pop(k, None)
                else:
                    out[k] = w
        return out

    def entry(i, j):
        out = {}
        for idx, T in enumerate(H):
            c = T.rows[i][j]
            if not F.is_zero(c):
                key = tuple(1 if u == idx else 0 for u in range(t))
                out[key] = c
        return out

    def det(rows, cols):
        if len(rows) == 1:
            return entry(rows[0], cols[0])
        out = {}
        for pos, c in enumerate(cols):
            minor = det(rows[1:], cols[:pos] + cols[pos + 1 :])
            term = pmul_(entry(rows[0], c), minor)
            if pos % 2:
                term = {k: F.neg(v) for k, v in term.items()}
            out = padd_(out, term)
        return out

    return bool(det(list(range(d)), list(range(d))))


# ---------------------------------------------------------------------------
# coefficient spans


class CoefficientBasis:
    """Basis of the span of matrix-coefficient functionals.

    Rows are evaluation vectors on the word set; provenance stores, for each
    kept basis functional, its expansion as sum of coefficients c^rho_ij,
    which is enough to reconstruct the comultiplication.
    """

    def __init__(self, presentation, reps, words, basis_rows, provenance):
        self.presentation = presentation
        self.reps = list(reps)
        self.words = list(words)
        self.basis_rows = [tuple(r) for r in basis_rows]
        self.provenance = provenance

    @property
    def dim(self):
        return len(self.basis_rows)

    def _space(self):
        F = self.presentation.field
        return Subspace.from_vectors(F, len(self.words), self.basis_rows)

    def coefficient_vector(self, rep_idx, i, j):
        rep = self.reps[rep_idx]
        return tuple(rep.evaluate_word(w).rows[i][j] for w in self.words)

    def coalgebra(self) -> Coalgebra:
        """Carrier coalgebra on this basis: Delta(c_ij) = sum_k c_ik (x) c_kj."""
        F = self.presentation.field
        n = self.dim
        space = self._space()
        # cache coordinates of every needed c^rho_ik vector
        coord_cache = {}

        def coords(rep_idx, i, j):
            key = (rep_idx, i, j)
            if key not in coord_cache:
                vec = self.coefficient_vector(rep_idx, i, j)
                c = space.coords(vec)
                if c is None:
                    raise RuntimeError("coefficient vector escaped the span")
                coord_cache[key] = c
            return coord_cache[key]

        delta = {}
        counit = []
        empty_idx = self.words.index(())
        for t in range(n):
            counit.append(self.basis_rows[t][empty_idx])
            for (rep_idx, i, j), c in self.provenance[t].items():
                dim_r = self.reps[rep_idx].dim
                for k in range(dim_r):
                    left = coords(rep_idx, i, k)
                    right = coords(rep_idx, k, j)
                    for a, la in enumerate(left):
                        if F.is_zero(la):
                            continue
                        for b, rb in enumerate(right):
                            if F.is_zero(rb):
                                continue
                            key = (t, a, b)
                            val = F.add(
                                delta.get(key, F.zero()), F.mul(c, F.mul(la, rb))
                            )
                            if F.is_zero(val):
                                delta.pop(key, None)
                            else:
                                delta[key] = val
        return Coalgebra(F, n, delta, counit)


def _word_set(symbols, max_len):
    words = [()]
    level = [()]
    for _ in range(max_len):
        level = [w + (s,) for w in level for s in symbols]
        words.extend(level)
    return words


def _symbols_of(P: PresentedAlgebra):
    syms = []
    for i, g in enumerate(P.generators):
        syms.append(i + 1)
        if g.invertible:
            syms.append(-(i + 1))
    return syms


def joint_stabilization_length(reps, symbols) -> int:
    """Least L with no growth of the joint word-image span at length L+1."""
    if not reps:
        return 0
    F = reps[0].presentation.field
    width = sum(r.dim * r.dim for r in reps)

    def tuple_vec(mats):
        out = []
        for M in mats:
            for row in M.rows:
                out.extend(row)
        return tuple(out)

    idents = [Matrix.identity(F, r.dim) for r in reps]
    space = Subspace.from_vectors(F, width, [tuple_vec(idents)])
    frontier = [(0, idents)]
    L = 0
    while frontier:
        new_frontier = []
        for length, mats in frontier:
            for s in symbols:
                nxt = [M.mul(r.matrix_of_symbol(s)) for M, r in zip(mats, reps)]
                v = tuple_vec(nxt)
                if not space.contains(v):
                    space = Subspace.from_vectors(F, width, list(space.basis) + [v])
                    new_frontier.append((length + 1, nxt))
                    L = max(L, length + 1)
        frontier = new_frontier
    return L


def coefficient_span(
    P: PresentedAlgebra, reps, budget=None, symbols=None
) -> CoefficientBasis:
    """Span of all matrix-coefficient functionals of the given representations.

    Functionals are realized as evaluation vectors on the word set W_L, with
    L the joint stabilization length, which makes evaluation injective on
    the span.  Returns the basis plus provenance expansion data.
    """
    reps = list(reps)
    F = P.field
    if symbols is None:
        symbols = _symbols_of(P)
    if not reps or not symbols:
        words = [()]
    else:
        L = joint_stabilization_length(reps, symbols)
        budget_mod.check(
            len(symbols) ** max(L, 1) * max(sum(r.dim ** 2 for r in reps), 1),
            budget,
            "coefficient span evaluation",
        )
        words = _word_set(symbols, L)
    table = [
        {w: r.evaluate_word(w) for w in words} for r in reps
    ]
    basis_rows = []
    provenance = []
    pivots = []
    for ridx, rep in enumerate(reps):
        for i in range(rep.dim):
            for j in range(rep.dim):
                vec = [table[ridx][w].rows[i][j] for w in words]
                prov = {(ridx, i, j): F.one()}
                # reduce against current basis, tracking provenance
                for row, rprov, piv in zip(basis_rows, provenance, pivots):
                    c = vec[piv]
                    if not F.is_zero(c):
                        vec = [F.sub(a, F.mul(c, b)) for a, b in zip(vec, row)]
                        for key, val in rprov.items():
                            nv = F.sub(prov.get(key, F.zero()), F.mul(c, val))
                            if F.is_zero(nv):
                                prov.pop(key, None)
                            else:
                                prov[key] = nv
                piv = next((t for t, x in enumerate(vec) if not F.is_zero(x)), None)
                if piv is None:
                    continue
                inv = F.inv(vec[piv])
                vec = [F.mul(inv, x) for x in vec]
                prov = {k: F.mul(inv, v) for k, v in prov.items()}
                # back-substitute into existing rows to keep reduced form
                for t in range(len(basis_rows)):
                    c = basis_rows[t][piv]
                    if not F.is_zero(c):
                        basis_rows[t] = tuple(
                            F.sub(a, F.mul(c, b)) for a, b in zip(basis_rows[t], vec)
                        )
                        for key, val in prov.items():
                            nv = F.sub(
                                provenance[t].get(key, F.zero()), F.mul(c, val)
                            )
                            if F.is_zero(nv):
                                provenance[t].pop(key, None)
                            else:
                                provenance[t][key] = nv
                basis_rows.append(tuple(vec))
                provenance.append(prov)
                pivots.append(piv)
    order = sorted(range(len(basis_rows)), key=lambda t: pivots[t])
    basis_rows = [basis_rows[t] for t in order]
    provenance = [provenance[t] for t in order]
    return CoefficientBasis(P, reps, words, basis_rows, provenance)
