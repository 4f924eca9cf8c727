"""Construction, minimization, comparison and language analysis of the
deterministic acceptors of the reduced-word language.

All live states accept; the dead state is implicit (-1 in transition tables).
Three builders are provided: the canonical automaton on elementary inversion
sets, the minimal automaton on gates, and the projection automaton of a
finite suffix- and join-closed subset of the group.
"""

import json
from collections import deque

from .core import _lmul_gen, length, reduced_word
from .lowgate import LowSet, _project, gates, low_elements
from .roots import elementary_roots, inversion_ids, table

DEAD = -1


class ResourceLimitError(RuntimeError):
    """A configured ball-size or state cap was exceeded."""


class JoinClosureError(RuntimeError):
    """The shadow passed to build_garside is not join closed."""


class LanguageMismatchError(ValueError):
    """Two automata expected to share a language disagree."""


class Automaton:
    """Deterministic acceptor over the generator alphabet.

    states are indexed 0..n-1 with display labels; delta[i][s] is a state
    index or DEAD.  Accessible by construction, every state accepting.
    """

    def __init__(self, alphabet, labels, start, delta):
        self.alphabet = tuple(alphabet)
        self.labels = list(labels)
        self.start = start
        self.delta = [list(row) for row in delta]

    @property
    def n_states(self):
        return len(self.delta)

    def step(self, state, s):
        if state == DEAD:
            return DEAD
        return self.delta[state][s]

    def run(self, word):
        state = self.start
        for s in word:
            state = self.step(state, s)
            if state == DEAD:
                return DEAD
        return state

    def accepts(self, word):
        return self.run(word) != DEAD

    def word_counts(self, n):
        """Number of accepted words of each length 0..n."""
        vec = [0] * self.n_states
        vec[self.start] = 1
        counts = [1]
        for _ in range(n):
            nxt = [0] * self.n_states
            for i, v in enumerate(vec):
                if v:
                    for t in self.delta[i]:
                        if t != DEAD:
                            nxt[t] += v
            counts.append(sum(nxt))
            vec = nxt
        return counts

    def to_json(self):
        return json.dumps(
            {
                "alphabet": list(self.alphabet),
                "start": self.start,
                "states": [{"label": lab} for lab in self.labels],
                "delta": [list(row) for row in self.delta],
            }
        )

    def to_dot(self):
        out = ["digraph reduced_words {", "  rankdir=LR;"]
        out.append('  __start [shape=point, label=""];')
        out.append(f"  __start -> q{self.start};")
        for i, lab in enumerate(self.labels):
            esc = lab.replace('"', '\\"')
            out.append(f'  q{i} [label="{esc}"];')
        for i, row in enumerate(self.delta):
            for s, t in enumerate(row):
                if t != DEAD:
                    out.append(f'  q{i} -> q{t} [label="{self.alphabet[s]}"];')
        out.append("}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(
            data["alphabet"],
            [st["label"] for st in data["states"]],
            data["start"],
            data["delta"],
        )


def export_dot(a):
    return a.to_dot()


def export_json(a):
    return a.to_json()


def automaton_from_json(text):
    return Automaton.from_json(text)


def canonical_state_sets(system):
    """Reachable elementary inversion sets and their transition table.

    Returns (order, delta): order[i] is a frozenset of root ids, delta[i][s]
    a state index or DEAD.  Cached per system.
    """
    cached = system.cache.get("canonical_states")
    if cached is not None:
        return cached
    eset = set(elementary_roots(system))
    rt = table(system)
    rank = system.rank
    img = []
    for s in range(rank):
        row = {}
        for a in eset:
            if a != s:
                im = rt.gen_image(s, a)
                row[a] = im if im in eset else None
        img.append(row)

    start = frozenset()
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        row = []
        for s in range(rank):
            if s in state:
                row.append(DEAD)
                continue
            imgs = img[s]
            nxt = {im for a in state if (im := imgs[a]) is not None}
            nxt.add(s)
            nxt = frozenset(nxt)
            t = index.get(nxt)
            if t is None:
                t = len(order)
                index[nxt] = t
                order.append(nxt)
                queue.append(nxt)
            row.append(t)
        delta.append(row)
    system.cache["canonical_states"] = (order, delta)
    return order, delta


def build_canonical(system) -> Automaton:
    """Brink-Howlett automaton: states are the reachable elementary inversion
    sets, with mu(A, s) = ({alpha_s} | sA) & E when alpha_s is not in A."""
    order, delta = canonical_state_sets(system)
    labels = ["{" + ",".join(map(str, sorted(a))) + "}" for a in order]
    return Automaton(system.gen_names, labels, 0, delta)


def _word_label(system, w):
    word = reduced_word(w)
    if not word:
        return "e"
    names = system.gen_names
    sep = "" if all(len(names[s]) == 1 for s in word) else "."
    return sep.join(names[s] for s in word)


def build_gate_automaton(system) -> Automaton:
    """Minimal (cone type) automaton: states are the gates, started at e, with
    mu(g, s) = gate_projection(s g) for s outside D_L(g)."""
    low = low_elements(system)
    gs = gates(system)
    rt = table(system)
    rank = system.rank

    start_low = low.index[frozenset()]
    index = {start_low: 0}
    order = [start_low]
    delta = []
    queue = deque([start_low])
    while queue:
        gi = queue.popleft()
        g = low.elements[gi]
        inv_g = low.inv[gi]
        row = []
        for s in range(rank):
            if s in inv_g:
                row.append(DEAD)
                continue
            ninv = {rt.gen_image(s, a) for a in inv_g}
            ninv.add(s)
            x = _lmul_gen(s, g)
            x._length = length(g) + 1
            proj, pinv = _project(low, x, ninv, length(g) + 1)
            ti = low.index.get(pinv)
            if ti is None or not gs.flags[ti]:
                raise AssertionError("gate projection left the gate set")
            t = index.get(ti)
            if t is None:
                t = len(order)
                index[ti] = t
                order.append(ti)
                queue.append(ti)
            row.append(t)
        delta.append(row)
    if len(order) != len(gs):
        raise AssertionError("gate automaton did not reach every gate")
    labels = [_word_label(system, low.elements[i]) for i in order]
    return Automaton(system.gen_names, labels, 0, delta)


def _bloom(ids):
    m = 0
    for r in ids:
        m |= 1 << (r & 63)
    return m


def build_garside(system, shadow, check_depth=None) -> Automaton:
    """Projection automaton of a finite suffix- and join-closed set B.

    mu(w, s) = pi_B(sw), where pi_B(v) is computed as the maximum of the
    prefixes of v inside B.  Each transition verifies that this maximum is
    unique (a single longest prefix dominating all others); a violation
    raises JoinClosureError.  That check only sees elements sw with w in B,
    so join-closure failures occurring deeper in the group can escape it;
    pass check_depth to also cross-validate the language against the brute
    force count up to that length.
    """
    if isinstance(shadow, LowSet):
        elements = list(shadow.elements)
        inv_sets = list(shadow.inv)
    else:
        elements = list(shadow)
        inv_sets = [inversion_ids(w) for w in elements]
    index = {inv: i for i, inv in enumerate(inv_sets)}
    if frozenset() not in index:
        raise ValueError("shadow must contain the identity")
    for s in range(system.rank):
        if frozenset({s}) not in index:
            raise ValueError("shadow must contain every generator")
    masks = [_bloom(inv) for inv in inv_sets]
    sizes = [len(inv) for inv in inv_sets]
    rt = table(system)
    rank = system.rank

    start_pos = index[frozenset()]
    state_index = {start_pos: 0}
    order = [start_pos]
    delta = []
    queue = deque([start_pos])
    while queue:
        pos = queue.popleft()
        inv_w = inv_sets[pos]
        row = []
        for s in range(rank):
            if s in inv_w:
                row.append(DEAD)
                continue
            v_inv = {rt.gen_image(s, a) for a in inv_w}
            v_inv.add(s)
            v_mask = _bloom(v_inv)
            prefixes = [
                i
                for i in range(len(elements))
                if not (masks[i] & ~v_mask) and inv_sets[i] <= v_inv
            ]
            best_size = max(sizes[i] for i in prefixes)
            top = [i for i in prefixes if sizes[i] == best_size]
            if len(top) > 1:
                culprits = ", ".join(repr(elements[i]) for i in top)
                raise JoinClosureError(
                    f"no unique maximal prefix in shadow (candidates {culprits}): "
                    "shadow is not join closed"
                )
            b = top[0]
            if any(not inv_sets[i] <= inv_sets[b] for i in prefixes):
                raise JoinClosureError(
                    f"maximal prefix {elements[b]!r} does not dominate all prefixes: "
                    "shadow is not join closed"
                )
            t = state_index.get(b)
            if t is None:
                t = len(order)
                state_index[b] = t
                order.append(b)
                queue.append(b)
            row.append(t)
        delta.append(row)
    labels = [_word_label(system, elements[i]) for i in order]
    auto = Automaton(system.gen_names, labels, 0, delta)
    if check_depth is not None:
        got = auto.word_counts(check_depth)
        want = brute_force_counts(system, check_depth)
        if got != want:
            raise JoinClosureError(
                f"projection automaton miscounts reduced words "
                f"(got {got}, expected {want}): shadow is not join closed"
            )
    return auto


def brute_force_counts(system, n, cap=5_000_000):
    """Exact number of reduced words per length 0..n, by multiplicity BFS.

    r(e) = 1 and r(w) accumulates over every left descent; elements are keyed
    by their inversion set, which determines them.
    """
    rt = table(system)
    rank = system.rank
    layer = {frozenset(): 1}
    counts = [1]
    total = 1
    for _ in range(n):
        nxt = {}
        for inv, r in layer.items():
            for s in range(rank):
                if s in inv:
                    continue
                ninv = {rt.gen_image(s, a) for a in inv}
                ninv.add(s)
                ninv = frozenset(ninv)
                nxt[ninv] = nxt.get(ninv, 0) + r
        total += len(nxt)
        if cap is not None and total > cap:
            raise ResourceLimitError(f"ball-size cap {cap} exceeded at length {len(counts)}")
        counts.append(sum(nxt.values()))
        layer = nxt
    return counts


def word_counts(a, n):
    return a.word_counts(n)


def classify(a, w):
    """State reached by the reduced word of w^-1: the part of w in the
    partition underlying the automaton."""
    state = a.run(reduced_word(w.inverse()))
    if state == DEAD:
        raise ValueError("automaton rejected a reduced word; wrong language")
    return state


def canonical_renumber(a) -> Automaton:
    """BFS renumbering from the start, children visited in generator order."""
    posmap = {a.start: 0}
    order = [a.start]
    i = 0
    while i < len(order):
        st = order[i]
        i += 1
        for t in a.delta[st]:
            if t != DEAD and t not in posmap:
                posmap[t] = len(order)
                order.append(t)
    delta = [
        [posmap[t] if t != DEAD else DEAD for t in a.delta[st]]
        for st in order
    ]
    labels = [a.labels[st] for st in order]
    return Automaton(a.alphabet, labels, 0, delta)


def minimize(a) -> Automaton:
    """Moore partition refinement; the quotient is the cone type automaton
    whenever the input recognizes the reduced-word language.

    The dead state is a virtual class of its own; all live states accept, so
    the initial partition is a single live class.
    """
    n = a.n_states
    cls = [0] * n
    n_classes = 1
    while True:
        sigs = {}
        new = [0] * n
        count = 0
        for i in range(n):
            sig = (cls[i], tuple(cls[t] if t != DEAD else DEAD for t in a.delta[i]))
            j = sigs.get(sig)
            if j is None:
                j = count
                sigs[sig] = j
                count += 1
            new[i] = j
        if count == n_classes:
            cls = new
            break
        cls, n_classes = new, count
    labels = [None] * n_classes
    delta = [None] * n_classes
    for i in range(n):
        c = cls[i]
        if labels[c] is None:
            labels[c] = a.labels[i]
            delta[c] = [cls[t] if t != DEAD else DEAD for t in a.delta[i]]
    return canonical_renumber(Automaton(a.alphabet, labels, cls[a.start], delta))


def isomorphic(a, b):
    """Table equality under canonical BFS numbering."""
    if a.alphabet != b.alphabet:
        return False
    ca = canonical_renumber(a)
    cb = canonical_renumber(b)
    return ca.delta == cb.delta


def refines(a, b, depth=12):
    """Whether the partition behind b refines the one behind a (a <= b).

    Checked as quotient-morphism existence: in the synchronized product BFS
    every b-state must pair with exactly one a-state.  Raises
    LanguageMismatchError when the two automata visibly disagree on the
    language (word counts to the given depth, or a live/dead split in the
    product).
    """
    if a.word_counts(depth) != b.word_counts(depth):
        raise LanguageMismatchError("automata disagree on word counts")
    assoc = {b.start: a.start}
    queue = deque([(a.start, b.start)])
    seen = {(a.start, b.start)}
    while queue:
        p, q = queue.popleft()
        for s in range(len(a.alphabet)):
            tp = a.delta[p][s]
            tq = b.delta[q][s]
            if (tp == DEAD) != (tq == DEAD):
                raise LanguageMismatchError("automata disagree on the language")
            if tq == DEAD:
                continue
            prev = assoc.get(tq)
            if prev is None:
                assoc[tq] = tp
            elif prev != tp:
                return False
            if (tp, tq) not in seen:
                seen.add((tp, tq))
                queue.append((tp, tq))
    return True


def language_leq(a, p, q):
    """Whether the language accepted from state p is contained in the one
    accepted from state q (all live states accepting)."""
    seen = {(p, q)}
    queue = deque([(p, q)])
    while queue:
        x, y = queue.popleft()
        for s in range(len(a.alphabet)):
            tx = a.delta[x][s]
            if tx == DEAD:
                continue
            ty = a.delta[y][s]
            if ty == DEAD:
                return False
            if (tx, ty) not in seen:
                seen.add((tx, ty))
                queue.append((tx, ty))
    return True
