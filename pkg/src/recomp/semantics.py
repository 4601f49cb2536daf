"""Explicit-state semantics: evaluation and state-graph generation.

States are tuples of values aligned with the spec's variable order.
`eval_expr`, `init_states` and `successors` form the reference
interpreter.  `to_lts` and `err_lts` drive a breadth-first enumeration;
for speed they run compiled steppers generated by `_compile_spec`, which
translates each action body into a Python function over state tuples.
The interpreter and the compiled path are cross-checked by the test
suite against an independent oracle.
"""

from __future__ import annotations

from . import syntax as sx
from . import values as va
from .lts import Cancelled, Lts, StateBoundExceeded
from .syntax import SpecError
from .values import EvalError

DEFAULT_BOUND = 10_000_000

# how many states to enumerate between cancellation checks
_POLL_EVERY = 1024


# --------------------------------------------------------------------------
# Interpreter


def eval_expr(e, env, penv=None):
    """Evaluate an expression under name bindings.

    env maps unprimed identifiers (variables, constants, parameters and
    quantifier-bound names) to values; penv maps primed variables.
    """
    if isinstance(e, sx.Name):
        try:
            return env[e.id]
        except KeyError:
            raise EvalError("unbound identifier %r" % e.id)
    if isinstance(e, sx.Prime):
        if penv is None or e.id not in penv:
            raise EvalError("unbound primed variable %r" % e.id)
        return penv[e.id]
    if isinstance(e, sx.BoolLit):
        return va.mk_bool(e.value)
    if isinstance(e, sx.IntLit):
        return va.mk_int(e.value)
    if isinstance(e, sx.StrLit):
        return va.mk_str(e.value)
    if isinstance(e, sx.SetLit):
        return va.mk_set(eval_expr(x, env, penv) for x in e.elems)
    if isinstance(e, sx.TupleLit):
        return va.mk_tup(eval_expr(x, env, penv) for x in e.elems)
    if isinstance(e, sx.RecordLit):
        return va.mk_rec((f, eval_expr(x, env, penv)) for f, x in e.fields)
    if isinstance(e, sx.FuncLit):
        dom = va.set_elems(eval_expr(e.domain, env, penv))
        inner = dict(env)
        pairs = []
        for d in dom:
            inner[e.var] = d
            pairs.append((d, eval_expr(e.body, inner, penv)))
        return va.mk_fun(pairs)
    if isinstance(e, sx.Apply):
        return va.apply_value(eval_expr(e.fn, env, penv),
                              eval_expr(e.arg, env, penv))
    if isinstance(e, sx.Except):
        return va.except_value(eval_expr(e.fn, env, penv),
                               eval_expr(e.key, env, penv),
                               eval_expr(e.value, env, penv))
    if isinstance(e, sx.Union):
        return va.set_union(eval_expr(e.left, env, penv),
                            eval_expr(e.right, env, penv))
    if isinstance(e, sx.Add):
        return va.add_values(eval_expr(e.left, env, penv),
                             eval_expr(e.right, env, penv))
    if isinstance(e, sx.In):
        return va.set_member(eval_expr(e.elem, env, penv),
                             eval_expr(e.set, env, penv))
    if isinstance(e, sx.Eq):
        return va.mk_bool(eval_expr(e.left, env, penv)
                          == eval_expr(e.right, env, penv))
    if isinstance(e, sx.Not):
        return va.mk_bool(not va.is_true(eval_expr(e.operand, env, penv)))
    if isinstance(e, sx.And):
        return va.mk_bool(all(va.is_true(eval_expr(x, env, penv))
                              for x in e.operands))
    if isinstance(e, sx.Or):
        return va.mk_bool(any(va.is_true(eval_expr(x, env, penv))
                              for x in e.operands))
    if isinstance(e, sx.Implies):
        if not va.is_true(eval_expr(e.left, env, penv)):
            return va.TRUE
        return eval_expr(e.right, env, penv)
    if isinstance(e, (sx.Forall, sx.Exists)):
        dom = va.set_elems(eval_expr(e.domain, env, penv))
        inner = dict(env)
        results = []
        for d in dom:
            inner[e.var] = d
            results.append(va.is_true(eval_expr(e.body, inner, penv)))
        return va.mk_bool(all(results) if isinstance(e, sx.Forall)
                          else any(results))
    if isinstance(e, sx.Unchanged):
        return va.mk_bool(all(env[n] == (penv or {}).get(n) for n in e.names))
    raise EvalError("cannot evaluate %r" % (e,))


def state_env(spec, q):
    env = dict(spec.config)
    env.update(zip(spec.variables, q))
    return env


def init_states(spec):
    """The (at most one, by the `v = e` Init discipline) initial states."""
    consts = dict(spec.config)
    assignment = {}
    for c in spec.init:
        v = c.left.id
        val = eval_expr(c.right, consts)
        if v in assignment and assignment[v] != val:
            return set()
        assignment[v] = val
    return {tuple(assignment[v] for v in spec.variables)}


def domain_values(spec):
    if spec.next_domain is None:
        return ()
    return va.set_elems(eval_expr(spec.next_domain, dict(spec.config)))


def _action_step(spec, action, env, d):
    """Successor of one action instance, or None if disabled.

    Raises SpecError if the action leaves a variable unconstrained.
    """
    env = dict(env)
    env[action.param] = d
    updates = {}
    framed = set()
    for c in action.conjuncts:
        kind = sx.classify_conjunct(c)
        if kind == "guard":
            if not va.is_true(eval_expr(c, env)):
                return None
        elif kind == "update":
            val = eval_expr(c.right, env)
            v = c.left.id
            if v in updates and updates[v] != val:
                return None
            updates[v] = val
        else:
            framed.update(c.names)
    loose = set(spec.variables) - set(updates) - framed
    if loose:
        raise SpecError("action %s leaves %s unconstrained"
                        % (action.name, ", ".join(sorted(loose))))
    for v in framed:
        if v in updates and updates[v] != env[v]:
            return None
    return tuple(updates.get(v, env[v]) for v in spec.variables)


def successors(spec, q):
    """All ((action, argument), successor) pairs from state q."""
    env = state_env(spec, q)
    out = set()
    for a in spec.actions:
        for d in domain_values(spec):
            q2 = _action_step(spec, a, env, d)
            if q2 is not None:
                out.add(((a.name, d), q2))
    return out


# --------------------------------------------------------------------------
# Compiled steppers
#
# Each action becomes `def step(q, d)` returning the successor tuple or
# None; each property becomes `def prop(q)` returning a Python bool.
# The generated code calls the same value helpers as the interpreter.


class _Codegen:
    def __init__(self, spec):
        self.spec = spec
        self.var_index = {v: i for i, v in enumerate(spec.variables)}
        self.consts = dict(spec.config)

    def expr(self, e, bound):
        go = lambda x: self.expr(x, bound)
        if isinstance(e, sx.Name):
            if e.id in bound:
                return "b_" + e.id
            if e.id in self.var_index:
                return "q[%d]" % self.var_index[e.id]
            if e.id in self.consts:
                return "c_" + e.id
            raise EvalError("unbound identifier %r" % e.id)
        if isinstance(e, sx.BoolLit):
            return "_B_TRUE" if e.value else "_B_FALSE"
        if isinstance(e, (sx.IntLit, sx.StrLit)):
            tag = "int" if isinstance(e, sx.IntLit) else "str"
            return repr((tag, e.value))
        if isinstance(e, sx.SetLit):
            return "_mk_set((%s))" % "".join(go(x) + ", " for x in e.elems)
        if isinstance(e, sx.TupleLit):
            return "('tup', (%s))" % "".join(go(x) + ", " for x in e.elems)
        if isinstance(e, sx.RecordLit):
            items = "".join("(%r, %s), " % (f, go(x)) for f, x in e.fields)
            return "_mk_rec((%s))" % items
        if isinstance(e, sx.FuncLit):
            body = self.expr(e.body, bound | {e.var})
            return ("_mk_fun([(b_%s, %s) for b_%s in _elems(%s)])"
                    % (e.var, body, e.var, go(e.domain)))
        if isinstance(e, sx.Apply):
            return "_apply(%s, %s)" % (go(e.fn), go(e.arg))
        if isinstance(e, sx.Except):
            return "_except(%s, %s, %s)" % (go(e.fn), go(e.key), go(e.value))
        if isinstance(e, sx.Union):
            return "_union(%s, %s)" % (go(e.left), go(e.right))
        if isinstance(e, sx.Add):
            return "_add(%s, %s)" % (go(e.left), go(e.right))
        if isinstance(e, sx.In):
            return "_member(%s, %s)" % (go(e.elem), go(e.set))
        if isinstance(e, sx.Eq):
            return "_mk_bool(%s == %s)" % (go(e.left), go(e.right))
        if isinstance(e, sx.Not):
            return "_mk_bool(not _is_true(%s))" % go(e.operand)
        if isinstance(e, sx.And):
            return "_mk_bool(%s)" % " and ".join(
                "_is_true(%s)" % go(x) for x in e.operands)
        if isinstance(e, sx.Or):
            return "_mk_bool(%s)" % " or ".join(
                "_is_true(%s)" % go(x) for x in e.operands)
        if isinstance(e, sx.Implies):
            return ("_mk_bool((not _is_true(%s)) or _is_true(%s))"
                    % (go(e.left), go(e.right)))
        if isinstance(e, (sx.Forall, sx.Exists)):
            quant = "all" if isinstance(e, sx.Forall) else "any"
            body = self.expr(e.body, bound | {e.var})
            return ("_mk_bool(%s(_is_true(%s) for b_%s in _elems(%s)))"
                    % (quant, body, e.var, go(e.domain)))
        raise EvalError("cannot compile %r" % (e,))

    def action_fn(self, action):
        lines = ["def step(q, b_%s):" % action.param]
        bound = {action.param}
        updates = {}
        framed = set()
        guards = []
        for c in action.conjuncts:
            kind = sx.classify_conjunct(c)
            if kind == "guard":
                guards.append(c)
            elif kind == "update":
                updates.setdefault(c.left.id, []).append(c.right)
            else:
                framed.update(c.names)
        loose = set(self.spec.variables) - set(updates) - framed
        if loose:
            raise SpecError("action %s leaves %s unconstrained"
                            % (action.name, ", ".join(sorted(loose))))
        for g in guards:
            lines.append("    if not _is_true(%s): return None"
                         % self.expr(g, bound))
        for v, rhss in updates.items():
            lines.append("    n_%s = %s" % (v, self.expr(rhss[0], bound)))
            for extra in rhss[1:]:
                lines.append("    if n_%s != %s: return None"
                             % (v, self.expr(extra, bound)))
            if v in framed:
                lines.append("    if n_%s != q[%d]: return None"
                             % (v, self.var_index[v]))
        parts = []
        for v in self.spec.variables:
            parts.append("n_%s" % v if v in updates
                         else "q[%d]" % self.var_index[v])
        lines.append("    return (%s)" % "".join(p + ", " for p in parts))
        return self._build("\n".join(lines), "step")

    def predicate_fn(self, body):
        src = "def prop(q):\n    return _is_true(%s)" % self.expr(body, set())
        return self._build(src, "prop")

    def _build(self, src, name):
        ns = {
            "_mk_bool": va.mk_bool, "_mk_set": va.mk_set,
            "_mk_rec": va.mk_rec, "_mk_fun": va.mk_fun,
            "_is_true": va.is_true, "_elems": va.set_elems,
            "_apply": va.apply_value, "_except": va.except_value,
            "_union": va.set_union, "_add": va.add_values,
            "_member": va.set_member,
            "_B_TRUE": va.TRUE, "_B_FALSE": va.FALSE,
        }
        for cname, cval in self.consts.items():
            ns["c_" + cname] = cval
        exec(compile(src, "<spec:%s>" % self.spec.name, "exec"), ns)
        return ns[name]


def _compile_spec(spec):
    cg = _Codegen(spec)
    return [(a.name, cg.action_fn(a)) for a in spec.actions]


def compile_predicate(spec, body):
    return _Codegen(spec).predicate_fn(body)


# --------------------------------------------------------------------------
# LTS construction


def _check_cancel(cancel):
    if cancel is not None and cancel.is_set():
        raise Cancelled()


def _enumerate(spec, violates, bound, cancel):
    """Shared BFS behind to_lts/err_lts.

    violates(q) -> bool redirects edges into the absorbing error state;
    pass None for plain state-graph generation.  Returns (state list,
    edge list over state indices, initial indices, pi index or None).
    Label indices refer to the canonical concrete-action alphabet.
    """
    steppers = _compile_spec(spec)
    domain = sorted(domain_values(spec))
    labels = {}
    for name, _ in steppers:
        for d in domain:
            labels[(name, d)] = len(labels)

    PI = -1
    index = {}
    states = []
    initials = []
    pi = None
    frontier = []

    def intern(q):
        nonlocal pi
        i = index.get(q)
        if i is None:
            if violates is not None and violates(q):
                if pi is None:
                    pi = PI
                return PI
            i = len(states)
            if i >= bound:
                raise StateBoundExceeded(bound)
            index[q] = i
            states.append(q)
            frontier.append(q)
        return i

    for q in sorted(init_states(spec)):
        initials.append(intern(q))

    edges = []
    done = 0
    head = 0
    while head < len(frontier):
        q = frontier[head]
        head += 1
        src = index[q]
        for name, step in steppers:
            for d in domain:
                q2 = step(q, d)
                if q2 is not None:
                    edges.append((src, labels[(name, d)], intern(q2)))
        done += 1
        if done % _POLL_EVERY == 0:
            _check_cancel(cancel)

    if pi is not None:
        pi = len(states)
        edges = [(pi if s == PI else s, l, pi if t == PI else t)
                 for s, l, t in edges]
        initials = [pi if s == PI else s for s in initials]
        for l in range(len(labels)):
            edges.append((pi, l, pi))
        n = len(states) + 1
    else:
        n = len(states)

    alphabet = tuple(sorted(labels, key=labels.get))
    return states, Lts.from_edges(n, alphabet, edges, initials, pi)


def to_lts(spec, bound=None, cancel=None):
    """Reachable state graph of a spec as an LTS."""
    _, lts = _enumerate(spec, None, bound or DEFAULT_BOUND, cancel)
    return lts

def err_lts(spec, prop, bound=None, cancel=None):
    """State graph with property-violating targets collapsed into pi."""
    extra = (sx.free_idents(prop.body) - set(spec.variables)
             - set(spec.constants))
    if extra:
        raise SpecError("property %s references variables outside %s: %s"
                        % (prop.name, spec.name, ", ".join(sorted(extra))))
    check = compile_predicate(spec, prop.body)
    _, lts = _enumerate(spec, lambda q: not check(q),
                        bound or DEFAULT_BOUND, cancel)
    return lts


def err_reach(spec, prop, bound=None, cancel=None):
    """Streaming monolithic check: is a property-violating state reachable?

    Avoids materializing edges; returns (violated, state count, witness
    action trace ending in the violating step, or None).
    """
    bound = bound or DEFAULT_BOUND
    check = compile_predicate(spec, prop.body)
    steppers = _compile_spec(spec)
    domain = sorted(domain_values(spec))

    parent = {}
    frontier = []
    for q in sorted(init_states(spec)):
        if q not in parent:
            parent[q] = None
            if not check(q):
                return True, len(parent), ()
            frontier.append(q)
    done = 0
    while frontier:
        nxt = []
        for q in frontier:
            for name, step in steppers:
                for d in domain:
                    q2 = step(q, d)
                    if q2 is not None and q2 not in parent:
                        parent[q2] = (q, (name, d))
                        if not check(q2):
                            trace = []
                            cur = q2
                            while parent[cur] is not None:
                                cur, act = parent[cur]
                                trace.append(act)
                            return True, len(parent), tuple(reversed(trace))
                        if len(parent) > bound:
                            raise StateBoundExceeded(bound)
                        nxt.append(q2)
            done += 1
            if done % _POLL_EVERY == 0:
                _check_cancel(cancel)
        frontier = nxt
    return False, len(parent), None
