"""Batched accumulation of joint image algebras over finite fields.

The degree-d product carrier is the dual of A / J_d, where J_d is the
intersection of the annihilators of all representations of dimension <= d.
Rather than summing coefficient spans rep by rep, this module keeps a small
"active" set of representations whose combined kernel already equals the
running intersection, and tests each enumerated candidate against it: a
candidate rho factors through the current image algebra iff

    rho(w_t) rho(g) = sum_s c[t,g,s] rho(w_s)

for the basis words w_t and multiplication coordinates c of the active set.
Failures are genuinely new kernel information and join the active set; the
test is exact and runs vectorized over candidate batches.
"""

from __future__ import annotations

import numpy as np

from . import budget as budget_mod
from .coded import Coded
from .fields import FieldError
from .linalg import Matrix
from .presented import (
    PresentedAlgebra,
    Representation,
    _relation_components,
    _symbols_of,
    enumerate_component_solutions,
)


class CodedRref:
    """Incremental fully-reduced row echelon accumulator with provenance.

    Rows are GF(p^s) vectors stored as (width, s) int arrays.  Provenance
    expresses each stored row as a combination of the independent vectors
    inserted so far, so coordinates in the *inserted* basis stay available.
    """

    def __init__(self, cd: Coded, width: int):
        self.cd = cd
        self.width = width
        self.rows = []      # rref rows, (width, s)
        self.pivots = []
        self.prov = []      # per row: dict {inserted_index: coord (s,)}
        self.count = 0      # number of independent insertions

    def _reduce(self, vec):
        cd = self.cd
        vec = vec % cd.p
        combo = {}
        for idx, (row, piv) in enumerate(zip(self.rows, self.pivots)):
            c = vec[piv].copy()
            if c.any():
                vec = (vec - np.einsum("u,lv,uvw->lw", c, row, cd.mul_tensor)) % cd.p
                combo[idx] = c
        return vec, combo

    def coords(self, vec):
        """Coordinates in the inserted basis, or None if outside the span."""
        residual, combo = self._reduce(vec)
        if residual.any():
            return None
        out = np.zeros((self.count, self.cd.s), dtype=np.int64)
        for idx, c in combo.items():
            for t, pc in self.prov[idx].items():
                out[t] = (out[t] + np.einsum("u,v,uvw->w", c, pc, self.cd.mul_tensor)) % self.cd.p
        return out

    def insert(self, vec):
        """Insert a vector; returns True if it was independent."""
        cd = self.cd
        residual, combo = self._reduce(vec)
        piv_idx = np.nonzero(residual.any(axis=-1))[0]
        if piv_idx.size == 0:
            return False
        piv = int(piv_idx[0])
        new_index = self.count
        prov = {new_index: cd.one.copy()}
        for idx, c in combo.items():
            for t, pc in self.prov[idx].items():
                prov[t] = (
                    prov.get(t, np.zeros(cd.s, dtype=np.int64))
                    - np.einsum("u,v,uvw->w", c, pc, cd.mul_tensor)
                ) % cd.p
        inv = cd.encode(cd.field.inv(cd.decode(residual[piv])))
        residual = np.einsum("lu,v,uvw->lw", residual, inv, cd.mul_tensor) % cd.p
        prov = {
            t: np.einsum("u,v,uvw->w", pc, inv, cd.mul_tensor) % cd.p
            for t, pc in prov.items()
        }
        # back-substitute to keep rows fully reduced
        for t in range(len(self.rows)):
            c = self.rows[t][piv].copy()
            if c.any():
                self.rows[t] = (
                    self.rows[t] - np.einsum("u,lv,uvw->lw", c, residual, cd.mul_tensor)
                ) % cd.p
                for u, pc in prov.items():
                    self.prov[t][u] = (
                        self.prov[t].get(u, np.zeros(cd.s, dtype=np.int64))
                        - np.einsum("u,v,uvw->w", c, pc, cd.mul_tensor)
                    ) % cd.p
        self.rows.append(residual)
        self.pivots.append(piv)
        self.prov.append(prov)
        self.count += 1
        return True


class ImageAlgebra:
    """Joint image algebra of the active representation set.

    Tracks basis words of the span of all word images, the inserted-basis
    coordinates of every (basis word) * (symbol) product, and the active
    representations themselves.
    """

    def __init__(self, presentation: PresentedAlgebra, cd: Coded):
        self.P = presentation
        self.cd = cd
        self.symbols = _symbols_of(presentation)
        self.active = []      # list of dicts: symbol -> (e,e,s) arrays
        self.active_dims = []
        self.active_exact = []  # Representation objects for provenance
        self.basis_words = []
        self.word_mats = []   # per basis word: list over active of (e,e,s)
        self.mult_coords = {}  # (t, symbol) -> (D, s) coords array
        self.stab_len = 0
        self._acc = None

    @property
    def dim(self):
        return len(self.basis_words) if self.active else 0

    def _tuple_vec(self, mats):
        if not mats:
            return np.zeros((1, self.cd.s), dtype=np.int64)
        return np.concatenate([m.reshape(-1, self.cd.s) for m in mats], axis=0)

    def _identity_mats(self):
        return [self.cd.identity_mat(e) for e in self.active_dims]

    def _rebuild(self):
        """Re-spin the joint span and the multiplication coordinates."""
        cd = self.cd
        width = max(sum(e * e for e in self.active_dims), 1)
        acc = CodedRref(cd, width)
        idents = self._identity_mats()
        acc.insert(self._tuple_vec(idents))
        self.basis_words = [()]
        self.word_mats = [idents]
        self.stab_len = 0
        frontier = [0]
        while frontier:
            new_frontier = []
            for t in frontier:
                for sym in self.symbols:
                    mats = [
                        cd.matmul(M, rep[sym])
                        for M, rep in zip(self.word_mats[t], self.active)
                    ]
                    if acc.insert(self._tuple_vec(mats)):
                        self.basis_words.append(self.basis_words[t] + (sym,))
                        self.word_mats.append(mats)
                        new_frontier.append(len(self.basis_words) - 1)
                        self.stab_len = max(self.stab_len, len(self.basis_words[t]) + 1)
            frontier = new_frontier
        self._acc = acc
        self.mult_coords = {}
        for t in range(len(self.basis_words)):
            for sym in self.symbols:
                mats = [
                    cd.matmul(M, rep[sym])
                    for M, rep in zip(self.word_mats[t], self.active)
                ]
                coords = acc.coords(self._tuple_vec(mats))
                if coords is None:
                    raise RuntimeError("span not multiplicatively closed")
                self.mult_coords[(t, sym)] = coords

    def element_coords(self, mats):
        """Inserted-basis coordinates of an active-tuple element, or None."""
        return self._acc.coords(self._tuple_vec(mats))

    def add(self, rep_coded: dict, dim: int, rep_exact: Representation):
        self.active.append(rep_coded)
        self.active_dims.append(dim)
        self.active_exact.append(rep_exact)
        self._rebuild()

    # ------------------------------------------------------------------
    # candidate testing

    def candidate_word_images(self, gens):
        """rho(w_t) for every basis word, batched: gens maps symbol -> (N,e,e,s)."""
        cd = self.cd
        first = next(iter(gens.values()))
        n, e = first.shape[0], first.shape[1]
        out = [None] * len(self.basis_words)
        ident = np.broadcast_to(cd.identity_mat(e), (n, e, e, cd.s)).copy()
        out[0] = ident
        # basis words are prefix-closed and discovered parent-first
        for t in range(1, len(self.basis_words)):
            word = self.basis_words[t]
            parent = self.basis_words.index(word[:-1])
            out[t] = cd.matmul(out[parent], gens[word[-1]])
        return out

    def factorization_mask(self, gens):
        """True where the candidate factors through the current image algebra."""
        cd = self.cd
        first = next(iter(gens.values()))
        n = first.shape[0]
        if not self.active:
            return np.zeros(n, dtype=bool)
        rho = self.candidate_word_images(gens)
        stacked = np.stack(rho, axis=1)  # (N, D, e, e, s)
        ok = np.ones(n, dtype=bool)
        for t in range(len(self.basis_words)):
            for sym in self.symbols:
                lhs = cd.matmul(rho[t], gens[sym])
                coords = self.mult_coords[(t, sym)]  # (D, s)
                rhs = np.einsum("du,ndijv,uvw->nijw", coords, stacked, cd.mul_tensor) % cd.p
                ok &= ~((lhs - rhs) % cd.p).any(axis=(1, 2, 3))
        return ok


def batched_component_solutions(P: PresentedAlgebra, comp, d, cd: Coded, budget=None):
    """Relation-component solutions as coded arrays, in lexicographic order.

    Returns {gen_index: (N, d, d, s) array} covering every generator of the
    component (eliminated ones included), plus N.  Free-generator assignments
    are filtered against the component relations in vectorized chunks.
    """
    from .presented import _elimination_plan, _definition_order, _element_order

    F = P.field
    q = F.order
    free, defs = _elimination_plan(P, comp)
    total = q ** (len(free) * d * d)
    budget_mod.check(total, budget, "representation enumeration")
    rels = [
        r for r in P.relations if {abs(s) - 1 for _, w in r for s in w} <= set(comp) and r
    ]
    if any(s < 0 for r in rels for _, w in r for s in w):
        # inverse symbols: fall back to the exact-path enumerator
        sols = enumerate_component_solutions(P, comp, d, budget)
        sols.sort(key=lambda sol: _solution_key(F, comp, sol))
        arrays = {}
        for g in comp:
            arrays[g] = (
                np.stack([cd.encode_matrix(sol[g]) for sol in sols])
                if sols
                else np.zeros((0, d, d, cd.s), np.int64)
            )
            if P.generators[g].invertible:
                arrays[("inv", g)] = (
                    np.stack([cd.encode_matrix(sol[g].inverse()) for sol in sols])
                    if sols
                    else np.zeros((0, d, d, cd.s), np.int64)
                )
        return arrays, len(sols), sols
    elems = list(F.elements())
    elems_coded = np.stack([cd.encode(x) for x in elems])  # (q, s)
    order = _definition_order(defs)
    cells = d * d
    chunk = max(1, min(total, 1 << 16))
    kept = {g: [] for g in comp}
    start = 0
    while start < total:
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        assigned = {}
        # digit decomposition: first free generator, first cell most significant
        shift = total
        for g in free:
            mats_digits = np.zeros((idx.size, cells), dtype=np.int64)
            for c in range(cells):
                shift //= q
                mats_digits[:, c] = (idx // shift) % q
            assigned[g] = elems_coded[mats_digits].reshape(idx.size, d, d, cd.s)
        for g in order:
            assigned[g] = _eval_expression_coded(cd, P.field, defs[g], d, assigned, idx.size)
        mask = np.ones(idx.size, dtype=bool)
        for rel in rels:
            acc = np.zeros((idx.size, d, d, cd.s), dtype=np.int64)
            for coeff, word in rel:
                M = np.broadcast_to(cd.identity_mat(d), (idx.size, d, d, cd.s)).copy()
                for s in word:
                    M = cd.matmul(M, assigned[s - 1])
                cc = cd.encode(coeff)
                acc = (acc + np.einsum("niju,v,uvw->nijw", M, cc, cd.mul_tensor)) % cd.p
            mask &= ~acc.any(axis=(1, 2, 3))
            if not mask.any():
                break
        if mask.any():
            for g in comp:
                kept[g].append(assigned[g][mask])
        start = stop
    arrays = {}
    n_sol = 0
    for g in comp:
        arrays[g] = (
            np.concatenate(kept[g]) if kept[g] else np.zeros((0, d, d, cd.s), np.int64)
        )
        n_sol = arrays[g].shape[0]
    if n_sol:
        # order by the full flattened component tuple (element order)
        order_map = {x: i for i, x in enumerate(elems)}
        keycols = []
        for g in comp:
            flat = arrays[g].reshape(n_sol, cells, cd.s)
            codes = np.zeros((n_sol, cells), dtype=np.int64)
            for ci, x in enumerate(elems):
                match = (flat == elems_coded[ci]).all(axis=2)
                codes[match] = order_map[x]
            keycols.append(codes)
        key = np.concatenate(keycols, axis=1)
        perm = np.lexsort(key[:, ::-1].T)
        for g in comp:
            arrays[g] = arrays[g][perm]
    return arrays, n_sol, None


def _eval_expression_coded(cd: Coded, F, expr, d, assigned, n):
    acc = np.zeros((n, d, d, cd.s), dtype=np.int64)
    for coeff, word in expr:
        M = np.broadcast_to(cd.identity_mat(d), (n, d, d, cd.s)).copy()
        for s in word:
            M = cd.matmul(M, assigned[s - 1])
        cc = cd.encode(coeff)
        acc = (acc + np.einsum("niju,v,uvw->nijw", M, cc, cd.mul_tensor)) % cd.p
    return acc


def coded_rep_from_solution(cd: Coded, P: PresentedAlgebra, sol: dict):
    """Solution dict (gen index -> exact Matrix) -> symbol-keyed coded dict."""
    out = {}
    for g in range(P.n_generators):
        M = sol[g]
        out[g + 1] = cd.encode_matrix(M)
        if P.generators[g].invertible:
            inv = M.inverse()
            out[-(g + 1)] = cd.encode_matrix(inv)
    return out


def accumulate_dimension(
    image: ImageAlgebra, P: PresentedAlgebra, d: int, budget=None, chunk: int = 2048
):
    """Feed every dimension-d representation into the image algebra.

    Candidates are the cartesian product of per-component solution lists,
    processed in lexicographic order; only candidates that fail the
    factorization test are materialized and added.
    """
    cd = image.cd
    if P.n_generators == 0:
        # the ground field has a unique representation in every dimension
        if not image.active:
            image.add({}, d, Representation(P, d, [], check=False))
        return
    comps = _relation_components(P)
    comp_data = []
    for comp in comps:
        arrays, n_sol, _ = batched_component_solutions(P, comp, d, cd, budget)
        if n_sol == 0:
            return
        comp_data.append((comp, arrays, n_sol))
    # annihilators are invariant under simultaneous conjugation and every
    # component's solution set is conjugation-closed, so one component may be
    # thinned to conjugacy-class representatives without changing the kernel
    # intersection
    if len(comp_data) > 1 or comp_data[0][2] > 64:
        big = max(range(len(comp_data)), key=lambda i: comp_data[i][2])
        comp, arrays, n_sol = comp_data[big]
        arrays, n_sol = _conjugacy_class_representatives(P, comp, arrays, n_sol, cd, d)
        comp_data[big] = (comp, arrays, n_sol)
    total = 1
    for _, _, n_sol in comp_data:
        total *= n_sol
    budget_mod.check(total, budget, "joint-representation stream")
    pending = np.arange(total, dtype=np.int64)
    while pending.size:
        batch = pending[:chunk]
        gens = _gather_gens(P, comp_data, batch)
        mask = image.factorization_mask(gens)
        fails = batch[~mask]
        rest = pending[chunk:]
        if fails.size:
            first = int(fails[0])
            sol = _solution_at(cd, comp_data, first)
            _add_solution(image, P, d, sol)
            pending = np.concatenate([fails[1:], rest])
        else:
            pending = rest


def _solution_key(F, comp, sol):
    from .presented import _element_order

    order = _element_order(F)
    return tuple(order[x] for g in comp for row in sol[g].rows for x in row)


def _conjugacy_class_representatives(P, comp, arrays, n_sol, cd: Coded, d):
    """Thin a component's solutions to conjugacy-class representatives.

    Solutions are bucketed by cheap conjugation invariants (traces of small
    words), then verified against bucket representatives by an exact
    isomorphism test; extras only cost time, never correctness.
    """
    from .presented import Generator, PresentedAlgebra as PA, Representation as Rep
    from .presented import are_isomorphic

    if n_sol <= 1:
        return arrays, n_sol
    F = P.field
    gens = [g for g in comp]
    # invariant key: traces of g, g^2 and pairwise products, batched
    mats = {g: arrays[g] for g in gens}
    keys = []
    for g in gens:
        A = mats[g]
        keys.append(np.einsum("niiu->nu", A) % cd.p)
        keys.append(np.einsum("niiu->nu", cd.matmul(A, A)) % cd.p)
    for a in gens:
        for b in gens:
            if a < b:
                keys.append(np.einsum("niiu->nu", cd.matmul(mats[a], mats[b])) % cd.p)
    key_arr = np.concatenate(keys, axis=1)
    # component-local presentation for exact isomorphism testing
    remap = {g: i + 1 for i, g in enumerate(gens)}
    rels = []
    for rel in P.relations:
        used = {abs(s) - 1 for _, w in rel for s in w}
        if used and used <= set(gens):
            rels.append(
                tuple(
                    (c, tuple(remap[abs(s) - 1] * (1 if s > 0 else -1) for s in w))
                    for c, w in rel
                )
            )
    local_gens = [Generator(P.generators[g].name, P.generators[g].invertible) for g in gens]
    Pc = PA(F, local_gens, [r for r in rels if not _is_inverse_law(F, r)])

    def exact_rep(i):
        return Rep(Pc, d, [cd.decode_matrix(arrays[g][i]) for g in gens], check=False)

    buckets = {}
    order = []
    for i in range(n_sol):
        k = key_arr[i].tobytes()
        buckets.setdefault(k, []).append(i)
        if len(buckets[k]) == 1:
            order.append(k)
    keep = []
    for k in order:
        reps = []
        for i in buckets[k]:
            cand = exact_rep(i)
            for r, _ in reps:
                if are_isomorphic(r, cand):
                    break
            else:
                reps.append((cand, i))
        keep.extend(i for _, i in reps)
    keep.sort()
    idx = np.array(keep, dtype=np.int64)
    thinned = {key: arr[idx] for key, arr in arrays.items()}
    return thinned, len(keep)


def _is_inverse_law(F, rel):
    if len(rel) != 2:
        return False
    (c1, w1), (c2, w2) = rel
    return (
        len(w1) == 2
        and w1[0] == -w1[1]
        and w2 == ()
    ) or (
        len(w2) == 2
        and w2[0] == -w2[1]
        and w1 == ()
    )


def _digits(comp_data, batch):
    sizes = [n for _, _, n in comp_data]
    out = []
    idx = np.asarray(batch).copy()
    for size in reversed(sizes):
        out.append(idx % size)
        idx //= size
    return list(reversed(out))


def _solution_at(cd, comp_data, index):
    sol = {}
    for (comp, arrays, _), dig in zip(comp_data, _digits(comp_data, [index])):
        i = int(dig[0])
        for g in comp:
            sol[g] = cd.decode_matrix(arrays[g][i])
    return sol


def _gather_gens(P, comp_data, batch):
    gens = {}
    for (comp, arrays, _), dig in zip(comp_data, _digits(comp_data, batch)):
        for g in comp:
            gens[g + 1] = arrays[g][dig]
            if P.generators[g].invertible:
                gens[-(g + 1)] = arrays[("inv", g)][dig]
    return gens


def _add_solution(image: ImageAlgebra, P, d, sol):
    rep = Representation(P, d, [sol[g] for g in range(P.n_generators)], check=False)
    image.add(coded_rep_from_solution(image.cd, P, sol), d, rep)


def truncated_image_algebra(P: PresentedAlgebra, d: int, budget=None, allowed_dims=None):
    """Image algebra of all representations of dimension <= d, with the
    per-dimension carrier dimension profile.

    allowed_dims, when given, lists the dimensions where representations can
    exist at all (per-factor module-dimension analysis); other levels are
    skipped without enumeration.
    """
    if not P.field.is_finite:
        raise FieldError("batched truncation needs a finite field")
    cd = Coded(P.field)
    image = ImageAlgebra(P, cd)
    profile = []
    for e in range(1, d + 1):
        if allowed_dims is None or e in allowed_dims:
            accumulate_dimension(image, P, e, budget)
        profile.append(image.dim)
    return image, profile


def image_algebra_from_reps(P: PresentedAlgebra, reps, budget=None):
    """Image algebra of an explicit representation list (any finite field)."""
    cd = Coded(P.field)
    image = ImageAlgebra(P, cd)
    for rep in reps:
        sol = {g: rep.mats[g] for g in range(P.n_generators)}
        gens = {}
        for g in range(P.n_generators):
            gens[g + 1] = cd.encode_matrix(rep.mats[g])[None]
            if P.generators[g].invertible:
                gens[-(g + 1)] = cd.encode_matrix(rep.inv_mats[g])[None]
        if not image.active:
            image.add(coded_rep_from_solution(cd, P, sol), rep.dim, rep)
        elif not bool(image.factorization_mask(gens)[0]):
            image.add(coded_rep_from_solution(cd, P, sol), rep.dim, rep)
    return image
