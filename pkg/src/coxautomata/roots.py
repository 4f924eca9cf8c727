"""Roots, inversion sets, the base Phi^1, final roots Phi^0, elementary and
spherical positive roots.

Every root is interned once per system into a RootTable and handled as a dense
integer id afterwards; inversion sets are id sets, so the witness scans and
fixpoints downstream are pure set arithmetic.  The table also caches, per
root, the data needed to decide l(s_beta * w) = l(w) - 1 cheaply: the
inversion set of the reflection s_beta and the absolute images |s_beta(gamma)|
of other roots.  That test uses the reflection-set identity

    l(s_beta * w) = l(s_beta) + l(w) - 2 * |Phi(s_beta) & |s_beta Phi(w)||,

which avoids one matrix product and one length computation per tested root.
"""

from .core import Element, MismatchError, is_spherical, left_descents, right_descents, reduced_word


class Root:
    """Interned root: exact coordinates in the simple-root basis."""

    __slots__ = ("rid", "coords", "support", "positive")

    def __init__(self, rid, coords, support, positive):
        self.rid = rid
        self.coords = coords
        self.support = support
        self.positive = positive

    def __repr__(self):
        sgn = "+" if self.positive else "-"
        return f"Root#{self.rid}{sgn}"


class RootTable:
    """Idempotent interner mapping canonical coordinate vectors to dense ids.

    The simple roots occupy ids 0..rank-1, so a generator index doubles as the
    id of its simple root.  Interning is the only mutation; it behaves as an
    atomic get-or-insert (CPython dict semantics) and everything else reads
    immutable data.
    """

    def __init__(self, system):
        self.system = system
        self._ids = {}
        self._roots = []
        self._gvecs = []
        self._gen_img = [dict() for _ in range(system.rank)]
        self._refl = {}
        self._refl_inv = {}
        self._refl_abs = {}
        ctx = system.ctx
        one, zero = ctx.one, ctx.zero
        for s in range(system.rank):
            coords = tuple(one if t == s else zero for t in range(system.rank))
            self.intern(coords)

    def intern(self, coords):
        rid = self._ids.get(coords)
        if rid is not None:
            return rid
        pos = neg = True
        for c in coords:
            sg = c.sign()
            if sg > 0:
                neg = False
            elif sg < 0:
                pos = False
        if pos == neg:
            raise ArithmeticError("mixed-sign or zero vector interned as a root")
        support = frozenset(s for s, c in enumerate(coords) if not c.is_zero())
        rid = len(self._roots)
        self._ids[coords] = rid
        self._roots.append(Root(rid, coords, support, pos))
        self._gvecs.append(None)
        return rid

    def __len__(self):
        return len(self._roots)

    def root(self, rid):
        return self._roots[rid]

    def coords(self, rid):
        return self._roots[rid].coords

    def is_positive(self, rid):
        return self._roots[rid].positive

    def neg(self, rid):
        return self.intern(tuple(-c for c in self._roots[rid].coords))

    def gvec(self, rid):
        """gram @ coords; entry s is <alpha_s, root>."""
        gv = self._gvecs[rid]
        if gv is None:
            gram = self.system.gram
            coords = self._roots[rid].coords
            n = self.system.rank
            gv = tuple(
                sum((gram[s][t] * coords[t] for t in range(1, n)), gram[s][0] * coords[0])
                for s in range(n)
            )
            self._gvecs[rid] = gv
        return gv

    def inner(self, a, b):
        ca = self._roots[a].coords
        gb = self.gvec(b)
        n = self.system.rank
        acc = ca[0] * gb[0]
        for t in range(1, n):
            acc = acc + ca[t] * gb[t]
        return acc

    def gen_image(self, s, rid):
        """Id of alpha_s-reflection applied to the root (sign preserved exactly)."""
        img = self._gen_img[s].get(rid)
        if img is None:
            coords = list(self._roots[rid].coords)
            coords[s] = coords[s] - 2 * self.gvec(rid)[s]
            img = self.intern(tuple(coords))
            self._gen_img[s][rid] = img
        return img

    def reflect_root(self, beta, gamma):
        """Id of s_beta(gamma)."""
        cb = self._roots[beta].coords
        cg = self._roots[gamma].coords
        c = self.inner(gamma, beta)
        two_c = 2 * c
        return self.intern(tuple(cg[t] - two_c * cb[t] for t in range(self.system.rank)))

    def refl_abs(self, beta, gamma):
        """Positive representative of s_beta(gamma), cached."""
        key = (beta, gamma)
        rid = self._refl_abs.get(key)
        if rid is None:
            rid = self.reflect_root(beta, gamma)
            if not self._roots[rid].positive:
                rid = self.neg(rid)
            self._refl_abs[key] = rid
        return rid

    def reflection_of(self, rid):
        """The reflection in a positive root, as an Element (an involution)."""
        elem = self._refl.get(rid)
        if elem is None:
            root = self._roots[rid]
            if not root.positive:
                raise ValueError("reflection_of expects a positive root")
            gv = self.gvec(rid)
            n = self.system.rank
            ident = self.system.identity().fwd
            mat = tuple(
                tuple(ident[u][v] - 2 * root.coords[u] * gv[v] for v in range(n))
                for u in range(n)
            )
            elem = Element(self.system, mat, mat)
            self._refl[rid] = elem
        return elem

    def refl_invset(self, rid):
        """Inversion set of the reflection s_beta, as a frozenset of ids."""
        ids = self._refl_inv.get(rid)
        if ids is None:
            ids = inversion_ids(self.reflection_of(rid))
            self._refl_inv[rid] = ids
        return ids

    def base_test(self, inv_ids, beta):
        """Whether l(s_beta * w) = l(w) - 1, given inv_ids = Phi(w) containing beta."""
        refl_inv = self.refl_invset(beta)
        need = (len(refl_inv) + 1) // 2
        hits = 0
        for gamma in inv_ids:
            if self.refl_abs(beta, gamma) in refl_inv:
                hits += 1
                if hits > need:
                    return False
        return hits == need


def table(system) -> RootTable:
    rt = system.cache.get("root_table")
    if rt is None:
        rt = RootTable(system)
        system.cache["root_table"] = rt
    return rt


def reflect(system, s, rid):
    """Image id of the root under the generator s."""
    return table(system).gen_image(s, rid)


def act(w, rid):
    """Image id of the root under the element w (may be a negative root)."""
    rt = table(w.system)
    coords = rt.coords(rid)
    fwd = w.fwd
    n = w.system.rank
    out = []
    for u in range(n):
        row = fwd[u]
        acc = row[0] * coords[0]
        for t in range(1, n):
            acc = acc + row[t] * coords[t]
        out.append(acc)
    return rt.intern(tuple(out))


def inner(system, a, b):
    return table(system).inner(a, b)


def reflection_of(system, rid):
    return table(system).reflection_of(rid)


def is_negative(system, rid):
    return not table(system).is_positive(rid)


def inversion_ids(w) -> frozenset:
    """Phi(w) as a frozenset of root ids (simple root of s has id s)."""
    rt = table(w.system)
    word = reduced_word(w)
    out = set()
    for j, sj in enumerate(word):
        rid = sj
        for i in range(j - 1, -1, -1):
            rid = rt.gen_image(word[i], rid)
        out.add(rid)
    return frozenset(out)


def inversion_set(w):
    """Sorted id tuple of Phi(w); its size equals l(w)."""
    return tuple(sorted(inversion_ids(w)))


def base(w):
    """Phi^1(w): roots beta in Phi(w) with l(s_beta w) = l(w) - 1."""
    rt = table(w.system)
    inv = inversion_ids(w)
    return tuple(b for b in sorted(inv) if rt.base_test(inv, b))


def final_roots(w):
    """Phi^0(w) = {-w alpha_s : s in D_R(w)}; always a subset of Phi^1(w)."""
    rt = table(w.system)
    out = []
    for s in right_descents(w):
        coords = tuple(-w.fwd[u][s] for u in range(w.system.rank))
        out.append(rt.intern(coords))
    return tuple(sorted(out))


def elementary_roots(system):
    """The finite set E of elementary roots, as a sorted id tuple.

    Fixpoint growth: from the simple roots, add s(alpha) whenever
    -1 < <alpha, alpha_s> < 0, both inequalities tested exactly.
    """
    cached = system.cache.get("elementary")
    if cached is None:
        rt = table(system)
        one = system.ctx.one
        found = set(range(system.rank))
        frontier = list(range(system.rank))
        while frontier:
            fresh = []
            for a in frontier:
                gv = rt.gvec(a)
                for s in range(system.rank):
                    x = gv[s]
                    if x.sign() < 0 and (x + one).sign() > 0:
                        img = rt.gen_image(s, a)
                        if img not in found:
                            found.add(img)
                            fresh.append(img)
            frontier = fresh
        cached = tuple(sorted(found))
        system.cache["elementary"] = cached
    return cached


def spherical_positive_roots(system):
    """Positive roots supported on a spherical subset, as a sorted id tuple."""
    cached = system.cache.get("spherical_roots")
    if cached is None:
        if system.rank > 12:
            raise ValueError("spherical subset enumeration limited to rank <= 12")
        rt = table(system)
        maximal = []
        subsets = sorted(
            (J for J in _all_subsets(system.rank) if is_spherical(system, J)),
            key=len,
            reverse=True,
        )
        for J in subsets:
            if not any(set(J) <= set(M) for M in maximal):
                maximal.append(J)
        found = set()
        for J in maximal:
            orbit = set(J)
            frontier = sorted(orbit)
            while frontier:
                fresh = []
                for rid in frontier:
                    for s in J:
                        img = rt.gen_image(s, rid)
                        if rt.is_positive(img) and img not in orbit:
                            orbit.add(img)
                            fresh.append(img)
                frontier = sorted(fresh)
            found |= orbit
        cached = tuple(sorted(found))
        system.cache["spherical_roots"] = cached
    return cached


def _all_subsets(rank):
    out = []
    for mask in range(1 << rank):
        out.append(tuple(i for i in range(rank) if mask >> i & 1))
    return out
