"""Low elements, gates, ultra-low elements, gate projection, boundary roots
and super-elementary roots.

Witness pools are always restricted to the (finite) set of low elements: a
minimal-length witness for Phi(x) & Phi(w) = {beta} is itself a gate, and
gates are low, so scanning L in increasing length order decides existence.
All scans work on cached inversion-id sets indexed by root, which keeps the
whole pipeline in plain set arithmetic after the low fixpoint.
"""

from concurrent.futures import ThreadPoolExecutor

from .core import _lmul_gen, _rmul_gen, length, right_descents
from .roots import base, elementary_roots, final_roots, inversion_ids, table


def _pmap(fn, items, threads):
    """Ordered map, optionally fanned out over worker threads."""
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


class LowSet:
    """The low elements in BFS (length) order with their cached root data."""

    def __init__(self, system, elements, inv_sets):
        self.system = system
        self.elements = elements
        self.inv = inv_sets
        self.index = {inv: i for i, inv in enumerate(inv_sets)}
        members = {}
        for i, inv in enumerate(inv_sets):
            for rid in inv:
                members.setdefault(rid, []).append(i)
        self.members = members
        self.phi0 = [final_roots(x) for x in elements]
        self._phi1 = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, element):
        return inversion_ids(element) in self.index

    def phi1(self, i):
        if self._phi1 is None:
            self._phi1 = [None] * len(self.elements)
        cached = self._phi1[i]
        if cached is None:
            cached = base(self.elements[i])
            self._phi1[i] = cached
        return cached

    def index_of(self, element):
        i = self.index.get(inversion_ids(element))
        if i is None:
            raise KeyError("element is not low")
        return i


def low_elements(system) -> LowSet:
    """Fixpoint M_{j+1} = M_j | {sw : w in M_j, s not in D_L(w), Phi^1(sw) in E}.

    Sound as a layered BFS because the low set is suffix closed: every low
    element of length k+1 is s times a low element of length k.
    """
    cached = system.cache.get("low_set")
    if cached is not None:
        return cached
    rt = table(system)
    eset = set(elementary_roots(system))
    rank = system.rank
    identity = system.identity()
    elements = [identity]
    inv_sets = [frozenset()]
    seen = {frozenset(): 0}
    rejected = set()
    layer = [0]
    while layer:
        fresh = []
        for i in layer:
            w = elements[i]
            inv = inv_sets[i]
            for s in range(rank):
                if s in inv:
                    continue
                ninv = {rt.gen_image(s, a) for a in inv}
                ninv.add(s)
                ninv = frozenset(ninv)
                if ninv in seen or ninv in rejected:
                    continue
                if _is_low(rt, eset, ninv):
                    x = _lmul_gen(s, w)
                    x._length = length(w) + 1
                    seen[ninv] = len(elements)
                    fresh.append(len(elements))
                    elements.append(x)
                    inv_sets.append(ninv)
                else:
                    rejected.add(ninv)
        layer = fresh
    low = LowSet(system, elements, inv_sets)
    system.cache["low_set"] = low
    return low


def _is_low(rt, eset, inv_ids):
    # Phi^1 subset of E iff no non-elementary inversion is a base root
    for b in inv_ids:
        if b in eset:
            continue
        if rt.base_test(inv_ids, b):
            return False
    return True


def _witness_scan(low, inv_x, beta):
    """Index of the first w in L (length order) with Phi(x) & Phi(w) = {beta}."""
    for i in low.members.get(beta, ()):
        if len(inv_x & low.inv[i]) == 1:
            return i
    return None


def witness(x, beta, pool):
    """Some w in pool with Phi(x) & Phi(w) = {beta}, or None.

    The pool is scanned in the order given; pass it sorted by length to get
    minimal witnesses first.
    """
    inv_x = inversion_ids(x)
    if beta not in inv_x:
        raise ValueError("beta is not an inversion of x")
    for w in pool:
        inv_w = inversion_ids(w)
        if beta in inv_w and len(inv_x & inv_w) == 1:
            return w
    return None


class GateSet:
    """The gates, flagged inside their LowSet by a membership bitmap."""

    def __init__(self, low, flags):
        self.low = low
        self.flags = flags
        self.indices = tuple(i for i, f in enumerate(flags) if f)
        self._members = None

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.elements())

    def elements(self):
        return [self.low.elements[i] for i in self.indices]

    def __contains__(self, element):
        i = self.low.index.get(inversion_ids(element))
        return i is not None and self.flags[i]

    def members(self):
        """root id -> gate positions whose inversion set contains it (length order)."""
        if self._members is None:
            members = {}
            for pos, i in enumerate(self.indices):
                for rid in self.low.inv[i]:
                    members.setdefault(rid, []).append(pos)
            self._members = members
        return self._members

    def witness_pos(self, inv_x, beta):
        """Position of the first gate witnessing beta for inv_x, or None."""
        inv = self.low.inv
        idx = self.indices
        for pos in self.members().get(beta, ()):
            if len(inv_x & inv[idx[pos]]) == 1:
                return pos
        return None


def gates(system, threads=1) -> GateSet:
    """x is a gate iff every final root of x has a witness among low elements."""
    cached = system.cache.get("gates")
    if cached is not None:
        return cached
    low = low_elements(system)

    def check(i):
        inv_x = low.inv[i]
        for b in low.phi0[i]:
            if _witness_scan(low, inv_x, b) is None:
                return False
        return True

    flags = _pmap(check, range(len(low)), threads)
    gs = GateSet(low, flags)
    system.cache["gates"] = gs
    return gs


def ultra_low(system, threads=1):
    """Elements of L whose whole base is witnessed; a subset of the gates."""
    cached = system.cache.get("ultra_low")
    if cached is not None:
        return cached
    low = low_elements(system)

    def check(i):
        inv_x = low.inv[i]
        for b in low.phi1(i):
            if _witness_scan(low, inv_x, b) is None:
                return False
        return True

    flags = _pmap(check, range(len(low)), threads)
    result = tuple(low.elements[i] for i, f in enumerate(flags) if f)
    system.cache["ultra_low"] = result
    return result


def gate_projection(x):
    """The gate of the part of the cone-type partition containing x.

    Repeatedly strips the smallest right descent whose final root has no
    witness in L; each strip keeps the cone type, so the fixpoint is the
    unique minimal-length element of the part, a gate and a prefix of x.
    """
    low = low_elements(x.system)
    proj, _ = _project(low, x, set(inversion_ids(x)), length(x))
    return proj


def _project(low, x, inv, ln):
    rt = table(x.system)
    rank = x.system.rank
    cur = x
    while True:
        strip = None
        for s in right_descents(cur):
            beta = rt.intern(tuple(-cur.fwd[u][s] for u in range(rank)))
            if _witness_scan(low, inv, beta) is None:
                strip = (s, beta)
                break
        if strip is None:
            cur._length = ln
            return cur, frozenset(inv)
        s, beta = strip
        cur = _rmul_gen(cur, s)
        inv.discard(beta)
        ln -= 1


def boundary_roots(x):
    """Roots cut out by the cone type T(x^-1): inversions of x witnessed by a gate."""
    gs = gates(x.system)
    inv_x = inversion_ids(x)
    return tuple(sorted(b for b in inv_x if gs.witness_pos(inv_x, b) is not None))


def super_elementary_roots(system, threads=1):
    """Roots beta with Phi(g) & Phi(g') = {beta} for some pair of gates.

    Equivalent to the unrestricted two-element definition: minimal witnesses
    in each coordinate are gates.  Every such root is elementary, so only
    elementary candidates are scanned.
    """
    cached = system.cache.get("super_elementary")
    if cached is not None:
        return cached
    gs = gates(system)
    low = gs.low
    inv = low.inv
    idx = gs.indices
    members = gs.members()

    def is_super(beta):
        lst = members.get(beta, ())
        for a in range(len(lst)):
            va = inv[idx[lst[a]]]
            for b in range(a, len(lst)):
                if len(va & inv[idx[lst[b]]]) == 1:
                    return True
        return False

    flags = _pmap(is_super, elementary_roots(system), threads)
    result = tuple(b for b, f in zip(elementary_roots(system), flags) if f)
    system.cache["super_elementary"] = result
    return result


def super_elementary_witness(system, beta):
    """A gate pair (g, g') with Phi(g) & Phi(g') = {beta}, or None."""
    gs = gates(system)
    low = gs.low
    idx = gs.indices
    lst = gs.members().get(beta, ())
    for a in range(len(lst)):
        va = low.inv[idx[lst[a]]]
        for b in range(a, len(lst)):
            if len(va & low.inv[idx[lst[b]]]) == 1:
                return low.elements[idx[lst[a]]], low.elements[idx[lst[b]]]
    return None
