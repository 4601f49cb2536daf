"""Independent brute-force oracle used to cross-check the package.

Deliberately shares no evaluation code with the implementation under
test: values are plain Python objects (frozensets for sets, sorted item
tuples for records/functions), states are dicts frozen to item tuples,
and the reachability search is a naive queue-based BFS over the full
next-state relation.
"""

from __future__ import annotations

from collections import deque

from recomp import syntax as sx

REC = "__rec__"
FUN = "__fun__"


class OBool:
    """Boolean wrapper so TRUE is distinct from 1 inside sets and under
    equality (plain Python has True == 1)."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __bool__(self):
        return self.v

    def __eq__(self, other):
        return isinstance(other, OBool) and self.v == other.v

    def __hash__(self):
        return hash(("__bool__", self.v))

    def __repr__(self):
        return "OBool(%r)" % self.v


def o_eval(e, env, penv=None):
    ev = lambda x: o_eval(x, env, penv)
    if isinstance(e, sx.Name):
        return env[e.id]
    if isinstance(e, sx.Prime):
        return penv[e.id]
    if isinstance(e, sx.BoolLit):
        return OBool(e.value)
    if isinstance(e, sx.IntLit):
        return e.value
    if isinstance(e, sx.StrLit):
        return e.value
    if isinstance(e, sx.SetLit):
        return frozenset(ev(x) for x in e.elems)
    if isinstance(e, sx.TupleLit):
        return tuple(ev(x) for x in e.elems)
    if isinstance(e, sx.RecordLit):
        return (REC,) + tuple(sorted((f, ev(x)) for f, x in e.fields))
    if isinstance(e, sx.FuncLit):
        pairs = []
        for d in sorted(o_eval(e.domain, env, penv), key=repr):
            pairs.append((d, o_eval(e.body, {**env, e.var: d}, penv)))
        return (FUN,) + tuple(sorted(pairs, key=repr))
    if isinstance(e, sx.Apply):
        f = ev(e.fn)
        k = ev(e.arg)
        if isinstance(f, tuple) and f and f[0] in (FUN, REC):
            for key, val in f[1:]:
                if key == k:
                    return val
            raise KeyError(k)
        return f[k - 1]  # tuple indexing, 1-based
    if isinstance(e, sx.Except):
        f = ev(e.fn)
        k = ev(e.key)
        v = ev(e.value)
        assert any(key == k for key, _ in f[1:])
        return (FUN,) + tuple((key, v if key == k else old) for key, old in f[1:])
    if isinstance(e, sx.Union):
        return ev(e.left) | ev(e.right)
    if isinstance(e, sx.Add):
        return ev(e.left) + ev(e.right)
    if isinstance(e, sx.In):
        return OBool(ev(e.elem) in ev(e.set))
    if isinstance(e, sx.Eq):
        return OBool(ev(e.left) == ev(e.right))
    if isinstance(e, sx.Not):
        return OBool(not ev(e.operand))
    if isinstance(e, sx.And):
        return OBool(all(ev(x) for x in e.operands))
    if isinstance(e, sx.Or):
        return OBool(any(ev(x) for x in e.operands))
    if isinstance(e, sx.Implies):
        return OBool((not ev(e.left)) or bool(ev(e.right)))
    if isinstance(e, sx.Forall):
        return OBool(all(o_eval(e.body, {**env, e.var: d}, penv)
                         for d in o_eval(e.domain, env, penv)))
    if isinstance(e, sx.Exists):
        return OBool(any(o_eval(e.body, {**env, e.var: d}, penv)
                         for d in o_eval(e.domain, env, penv)))
    if isinstance(e, sx.Unchanged):
        return OBool(all(env[n] == penv[n] for n in e.names))
    raise TypeError(e)


def _consts(spec):
    out = {}
    for name, val in spec.config:
        out[name] = _conv(val)
    return out


def _conv(v):
    """Convert an implementation value into the oracle's representation."""
    tag, payload = v
    if tag == "bool":
        return OBool(payload)
    if tag in ("int", "str"):
        return payload
    if tag == "set":
        return frozenset(_conv(x) for x in payload)
    if tag == "tup":
        return tuple(_conv(x) for x in payload)
    if tag == "rec":
        return (REC,) + tuple(sorted((f, _conv(x)) for f, x in payload))
    if tag == "fun":
        return (FUN,) + tuple(sorted(((_conv(k), _conv(x)) for k, x in payload),
                                     key=repr))
    raise TypeError(v)


def oracle_init(spec):
    consts = _consts(spec)
    env = {}
    for c in spec.init:
        env[c.left.id] = o_eval(c.right, consts)
    return tuple(sorted(env.items()))


def oracle_successors(spec, state):
    """All ((action, argument), next state) pairs, by direct conjunct
    checking over every candidate parameter value."""
    consts = _consts(spec)
    env = {**consts, **dict(state)}
    if spec.next_domain is None:
        return []
    domain = sorted(o_eval(spec.next_domain, consts), key=repr)
    out = []
    for a in spec.actions:
        for d in domain:
            aenv = {**env, a.param: d}
            penv = {}
            ok = True
            for c in a.conjuncts:
                kind = sx.classify_conjunct(c)
                if kind == "guard":
                    if not o_eval(c, aenv):
                        ok = False
                        break
                elif kind == "update":
                    val = o_eval(c.right, aenv)
                    if c.left.id in penv and penv[c.left.id] != val:
                        ok = False
                        break
                    penv[c.left.id] = val
                else:
                    for nm in c.names:
                        if nm in penv and penv[nm] != aenv[nm]:
                            ok = False
                            break
                        penv[nm] = aenv[nm]
                    if not ok:
                        break
            if ok and set(penv) == set(spec.variables):
                nxt = tuple(sorted(penv.items()))
                out.append(((a.name, d), nxt))
    return out


def oracle_reach(spec, bound=2_000_000):
    """Reachable states and edges by naive BFS."""
    start = oracle_init(spec)
    seen = {start}
    queue = deque([start])
    edges = []
    while queue:
        q = queue.popleft()
        for act, q2 in oracle_successors(spec, q):
            edges.append((q, act, q2))
            if q2 not in seen:
                seen.add(q2)
                assert len(seen) <= bound, "oracle bound exceeded"
                queue.append(q2)
    return seen, edges


def oracle_check(spec, prop, bound=2_000_000):
    """(holds, shortest counterexample action trace or None)."""
    consts = _consts(spec)

    def ok(state):
        return o_eval(prop.body, {**consts, **dict(state)})

    start = oracle_init(spec)
    if not ok(start):
        return False, ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for act, q2 in oracle_successors(spec, q):
            if q2 not in parent:
                parent[q2] = (q, act)
                if not ok(q2):
                    trace = []
                    cur = q2
                    while parent[cur] is not None:
                        cur, a = parent[cur]
                        trace.append(a)
                    return False, tuple(reversed(trace))
                assert len(parent) <= bound, "oracle bound exceeded"
                queue.append(q2)
    return True, None


def oracle_replay(spec, trace):
    """Follow an action trace from the initial state; returns the final
    state or raises if some step is not enabled."""
    state = oracle_init(spec)
    for act in trace:
        nxt = [q2 for a, q2 in oracle_successors(spec, state) if a == act]
        assert nxt, "step %r not enabled" % (act,)
        state = nxt[0]
    return state
