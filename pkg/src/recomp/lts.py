"""Labeled transition systems and the operations the verifier needs:
parallel composition, error-state reachability, bisimulation
minimization, and the trace oracles used by the test suite.

States are dense integers.  Transitions are kept in compressed sparse
row form (one offsets array plus parallel label/target arrays), which
keeps multi-million-edge systems affordable.  Labels are concrete
actions `(name, argument)`; hidden actions are relabeled to a tau label
that is unique per LTS, so tau never synchronizes in a composition.
"""

from __future__ import annotations

import itertools
from array import array
from dataclasses import dataclass
from typing import Optional

_POLL_EVERY = 1024

_tau_counter = itertools.count()


class StateBoundExceeded(Exception):
    def __init__(self, bound):
        super().__init__("state bound of %d exceeded" % bound)
        self.bound = bound


class Cancelled(Exception):
    """Cooperative cancellation requested by the portfolio coordinator."""


def _check_cancel(cancel):
    if cancel is not None and cancel.is_set():
        raise Cancelled()


def is_tau(label):
    return label[0] == "τ"


def fresh_tau():
    return ("τ", next(_tau_counter))


@dataclass(frozen=True)
class Lts:
    n_states: int
    alphabet: tuple  # of (action name, argument Value or None)
    offsets: array  # CSR row starts, length n_states + 1
    labels: array  # per-edge alphabet index
    dsts: array  # per-edge target state
    initials: tuple  # of state indices
    pi: Optional[int] = None

    @staticmethod
    def from_edges(n, alphabet, edges, initials, pi=None):
        counts = [0] * (n + 1)
        for s, _, _ in edges:
            counts[s + 1] += 1
        offsets = array("q", itertools.accumulate(counts))
        labels = array("i", bytes(4 * len(edges)))
        dsts = array("i", bytes(4 * len(edges)))
        pos = list(offsets[:-1])
        for s, l, t in edges:
            i = pos[s]
            labels[i] = l
            dsts[i] = t
            pos[s] = i + 1
        return Lts(n, tuple(alphabet), offsets, labels, dsts,
                   tuple(initials), pi)

    @property
    def n_edges(self):
        return len(self.dsts)

    def out(self, s):
        """Outgoing (label index, target) pairs of a state."""
        lo, hi = self.offsets[s], self.offsets[s + 1]
        return zip(self.labels[lo:hi], self.dsts[lo:hi])

    def iter_edges(self):
        for s in range(self.n_states):
            for l, t in self.out(s):
                yield s, l, t

    def grouped(self, s):
        """Outgoing edges of s grouped by label index."""
        by = {}
        for l, t in self.out(s):
            by.setdefault(l, []).append(t)
        return by


def unit_lts():
    """The identity of parallel composition: one state, empty alphabet."""
    return Lts.from_edges(1, (), [], [0])


# --------------------------------------------------------------------------
# Composition


def compose(a, b, bound=None, cancel=None):
    """Parallel composition: synchronize on shared labels, interleave the
    rest; restricted to reachable product states; pi coordinates collapse
    into a single absorbing pi."""
    if a.pi is not None and b.pi is not None:
        raise ValueError("at most one composition operand may carry pi")
    if b.pi is not None:
        a, b = b, a

    alphabet = sorted(set(a.alphabet) | set(b.alphabet), key=repr)
    uidx = {l: i for i, l in enumerate(alphabet)}
    a_map = [uidx[l] for l in a.alphabet]
    b_map = [uidx[l] for l in b.alphabet]
    shared = set(a.alphabet) & set(b.alphabet)
    a_shared = {i for i, l in enumerate(a.alphabet) if l in shared}
    b_shared = {i for i, l in enumerate(b.alphabet) if l in shared}
    b_by_union = [dict() for _ in range(b.n_states)]
    for y in range(b.n_states):
        g = b.grouped(y)
        b_by_union[y] = {b_map[l]: ts for l, ts in g.items()}

    PI = -1
    index = {}
    order = []
    pi_seen = False

    def intern(x, y):
        nonlocal pi_seen
        if a.pi is not None and x == a.pi:
            pi_seen = True
            return PI
        key = (x, y)
        i = index.get(key)
        if i is None:
            i = len(order)
            if bound is not None and i >= bound:
                raise StateBoundExceeded(bound)
            index[key] = i
            order.append(key)
        return i

    initials = []
    for x in a.initials:
        for y in b.initials:
            initials.append(intern(x, y))

    edges = []
    head = 0
    while head < len(order):
        x, y = order[head]
        src = head
        head += 1
        a_adj = a.grouped(x)
        b_adj = b_by_union[y]
        for l, ts in a_adj.items():
            ul = a_map[l]
            if l in a_shared:
                for t in ts:
                    for t2 in b_adj.get(ul, ()):
                        edges.append((src, ul, intern(t, t2)))
            else:
                for t in ts:
                    edges.append((src, ul, intern(t, y)))
        for ul, ts in b_adj.items():
            if alphabet[ul] not in shared:
                for t2 in ts:
                    edges.append((src, ul, intern(x, t2)))
        if head % _POLL_EVERY == 0:
            _check_cancel(cancel)

    n = len(order)
    pi = None
    if pi_seen:
        pi = n
        n += 1
        edges = [(s if s != PI else pi, l, t if t != PI else pi)
                 for s, l, t in edges]
        initials = [s if s != PI else pi for s in initials]
        for l in range(len(alphabet)):
            edges.append((pi, l, pi))
    return Lts.from_edges(n, alphabet, edges, initials, pi)


def compose_all(parts, bound=None, cancel=None):
    out = unit_lts()
    for p in parts:
        out = compose(out, p, bound=bound, cancel=cancel)
    return out


# --------------------------------------------------------------------------
# Reachability


def reachable(l):
    seen = set(l.initials)
    stack = list(l.initials)
    while stack:
        s = stack.pop()
        for _, t in l.out(s):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def pi_reachable(l):
    return l.pi is not None and l.pi in reachable(l)


# --------------------------------------------------------------------------
# Minimization


def _refine(n, adj, seed):
    """Signature-based partition refinement.

    adj[s] is an iterable of (label, block-of-target-relevant key) edge
    descriptors; seed[s] is the initial block id.  Returns a list mapping
    each state to its final block id (dense, ordered by first occurrence).
    """
    block = list(seed)
    n_blocks = len(set(block))
    while True:
        sigs = {}
        new = [0] * n
        for s in range(n):
            sig = (block[s], frozenset((l, block[t]) for l, t in adj[s]))
            b = sigs.get(sig)
            if b is None:
                b = len(sigs)
                sigs[sig] = b
            new[s] = b
        if len(sigs) == n_blocks:
            return new
        block, n_blocks = new, len(sigs)


def _quotient(l, block):
    n_blocks = max(block) + 1 if l.n_states else 0
    rep_edges = set()
    for s, lab, t in l.iter_edges():
        rep_edges.add((block[s], lab, block[t]))
    initials = sorted({block[s] for s in l.initials})
    pi = block[l.pi] if l.pi is not None else None
    return Lts.from_edges(n_blocks, l.alphabet, sorted(rep_edges),
                          initials, pi)


def _saturate(l, tau_idx):
    """Weak (double-arrow) transition relation after hiding.

    Returns per-state edge lists where label -1 stands for the tau-star
    closure and visible labels mean tau* . l . tau*.
    """
    closure = []
    for s in range(l.n_states):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for lab, t in l.out(u):
                if lab in tau_idx and t not in seen:
                    seen.add(t)
                    stack.append(t)
        closure.append(seen)
    adj = []
    for s in range(l.n_states):
        out = set()
        for u in closure[s]:
            out.add((-1, u))
            for lab, t in l.out(u):
                if lab not in tau_idx:
                    for t2 in closure[t]:
                        out.add((lab, t2))
        adj.append(out)
    return adj


def minimize(l, mode="strong", hide=None):
    """Quotient by bisimulation; pi (if any) stays in its own class.

    mode "strong": strong bisimulation on the given labels.
    mode "observational": labels in `hide` are renamed to a fresh tau
    first, then states are merged up to weak bisimulation.
    """
    if l.n_states == 0:
        return l
    if mode not in ("strong", "observational"):
        raise ValueError("unknown minimization mode %r" % mode)
    if mode == "observational" and hide:
        l = hide_labels(l, hide)
    seed = [0] * l.n_states
    if l.pi is not None:
        seed[l.pi] = 1
    if mode == "strong":
        adj = [list(l.out(s)) for s in range(l.n_states)]
    else:
        tau_idx = {i for i, lab in enumerate(l.alphabet) if is_tau(lab)}
        adj = _saturate(l, tau_idx)
    block = _refine(l.n_states, adj, seed)
    return _quotient(l, block)


def hide_labels(l, hide):
    """Relabel the given actions to one fresh tau label."""
    hidden = {i for i, lab in enumerate(l.alphabet) if lab in hide}
    if not hidden:
        return l
    tau = fresh_tau()
    alphabet = [lab for i, lab in enumerate(l.alphabet) if i not in hidden]
    alphabet.append(tau)
    remap = {}
    kept = 0
    for i, lab in enumerate(l.alphabet):
        if i in hidden:
            remap[i] = len(alphabet) - 1
        else:
            remap[i] = kept
            kept += 1
    edges = [(s, remap[lab], t) for s, lab, t in l.iter_edges()]
    return Lts.from_edges(l.n_states, alphabet, edges, l.initials, l.pi)


# --------------------------------------------------------------------------
# Trace oracles (test-scale)


def trace_set(l, length, alphabet=None):
    """All action sequences of length <= `length` admitted from the
    initial states.  Over a declared super-alphabet, actions outside the
    LTS's own alphabet are stutters (always allowed, state unchanged)."""
    alpha = tuple(alphabet) if alphabet is not None else l.alphabet
    own = {lab: i for i, lab in enumerate(l.alphabet)}
    grouped = [l.grouped(s) for s in range(l.n_states)]
    memo = {}

    def suffixes(states, k):
        if k == 0:
            return {()}
        key = (states, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out = {()}
        for lab in alpha:
            i = own.get(lab)
            if i is None:
                targets = states
            else:
                targets = frozenset(t for s in states
                                    for t in grouped[s].get(i, ()))
            if targets:
                out.update((lab,) + rest for rest in suffixes(targets, k - 1))
        memo[key] = out
        return out

    return suffixes(frozenset(l.initials), length)


def traces_equal(a, b, length, alphabet=None):
    """Prefix-language equality up to `length` without materializing the
    trace sets (synchronized subset construction)."""
    if alphabet is None:
        alphabet = sorted(set(a.alphabet) | set(b.alphabet), key=repr)

    def step(l, grouped, own, states, lab):
        i = own.get(lab)
        if i is None:
            return states
        return frozenset(t for s in states for t in grouped[s].get(i, ()))

    a_own = {lab: i for i, lab in enumerate(a.alphabet)}
    b_own = {lab: i for i, lab in enumerate(b.alphabet)}
    a_grouped = [a.grouped(s) for s in range(a.n_states)]
    b_grouped = [b.grouped(s) for s in range(b.n_states)]

    start = (frozenset(a.initials), frozenset(b.initials))
    seen = {start: 0}
    frontier = [start]
    depth = 0
    while frontier and depth < length:
        depth += 1
        nxt = []
        for sa, sb in frontier:
            for lab in alphabet:
                ta = step(a, a_grouped, a_own, sa, lab)
                tb = step(b, b_grouped, b_own, sb, lab)
                if bool(ta) != bool(tb):
                    return False
                if ta and (ta, tb) not in seen:
                    seen[(ta, tb)] = depth
                    nxt.append((ta, tb))
        frontier = nxt
    return True


def bisimilar(a, b):
    """Strong bisimilarity of the initial states, keeping pi classes
    apart from ordinary states."""
    alphabet = sorted(set(a.alphabet) | set(b.alphabet), key=repr)
    uidx = {lab: i for i, lab in enumerate(alphabet)}
    n = a.n_states + b.n_states
    adj = []
    seed = []
    for l, off in ((a, 0), (b, a.n_states)):
        for s in range(l.n_states):
            adj.append([(uidx[l.alphabet[lab]], t + off) for lab, t in l.out(s)])
            seed.append(1 if l.pi == s else 0)
    if n == 0:
        return True
    block = _refine(n, adj, seed)
    a_init = {block[s] for s in a.initials}
    b_init = {block[s + a.n_states] for s in b.initials}
    return a_init == b_init


# --------------------------------------------------------------------------
# Textual dump


def fmt_label(label):
    from .values import fmt_value

    name, arg = label
    if arg is None:
        return name
    if name == "τ":
        return "tau"
    return "%s(%s)" % (name, fmt_value(arg))


def dump(l):
    """Edge-list text form: initial states, then one line per edge."""
    lines = ["states %d" % l.n_states]
    for s in sorted(l.initials):
        lines.append("init %d" % s)
    if l.pi is not None:
        lines.append("pi %d" % l.pi)
    for s, lab, t in l.iter_edges():
        lines.append("%d %s %d" % (s, fmt_label(l.alphabet[lab]), t))
    return "\n".join(lines) + "\n"
