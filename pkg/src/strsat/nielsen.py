"""Nielsen transformation for quadratic equation systems.

A node is a canonical system of equations over variables and single
symbols; edges apply the Nielsen rules to a leading pair and trim.
Satisfiability is reachability of the empty system.  For length
reasoning the graph doubles as a counter system, read backward from the
terminal: crossing x -> a.x adds one to x's counter, x -> eps resets it,
x -> y.x adds y's current counter.  Flattening enumerates simple paths
with attached self-loops and 2-cycles; each flat automaton becomes one
disjunct of the length lemma, with loop counts as fresh existentials.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from strsat.errors import ResourceExceeded
from strsat.ir import Formula, Lin, LinEq, LinLe, fand
from strsat.system import ConjunctiveSystem

NODE_CAP = 4096
SCHEMA_CAP = 512

# nodes: tuple of equations; equation: ordered pair of sides; side: tuple of
# ('v', name) | ('c', code) items


def is_quadratic(csys: ConjunctiveSystem) -> bool:
    if csys.disequations:
        return False
    if any(not nfa.is_universal() for nfa in csys.regular.values()):
        return False
    counts: dict = {}
    for lhs, rhs in csys.equations:
        for side in (lhs, rhs):
            for it in side:
                if it[0] == "v":
                    counts[it[1]] = counts.get(it[1], 0) + 1
    return all(c <= 2 for c in counts.values())


def system_to_node(csys: ConjunctiveSystem):
    eqs = []
    for lhs, rhs in csys.equations:
        pair = []
        for side in (lhs, rhs):
            items = []
            for it in side:
                if it[0] == "v":
                    items.append(("v", it[1]))
                else:
                    items.extend(("c", cp) for cp in it[1])
            pair.append(tuple(items))
        eqs.append((pair[0], pair[1]))
    return canonical(eqs)


def canonical(eqs):
    out = []
    for l, r in eqs:
        while l and r and l[0] == r[0]:
            l, r = l[1:], r[1:]
        if not l and not r:
            continue
        out.append((l, r) if l <= r else (r, l))
    return tuple(sorted(out))


def _subst_node(node, name, repl):
    eqs = []
    for l, r in node:
        eqs.append(
            (
                tuple(j for it in l for j in (repl if it == ("v", name) else (it,))),
                tuple(j for it in r for j in (repl if it == ("v", name) else (it,))),
            )
        )
    return canonical(eqs)


def _apply(node, label):
    kind = label[0]
    if kind == "eps":
        return _subst_node(node, label[1], ())
    if kind == "sym":
        _, x, code = label
        return _subst_node(node, x, (("c", code), ("v", x)))
    _, x, y = label
    return _subst_node(node, x, (("v", y), ("v", x)))


def _node_labels(node):
    labels = set()
    for l, r in node:
        for a, b in ((l, r), (r, l)):
            if not a:
                if b and b[0][0] == "v":
                    labels.add(("eps", b[0][1]))
                continue
            if not b:
                continue
            u, v = a[0], b[0]
            if u[0] == "c" and v[0] == "v":
                labels.add(("sym", v[1], u[1]))
                labels.add(("eps", v[1]))
            elif u[0] == "v" and v[0] == "c":
                labels.add(("sym", u[1], v[1]))
                labels.add(("eps", u[1]))
            elif u[0] == "v" and v[0] == "v" and u != v:
                labels.add(("var", u[1], v[1]))
                labels.add(("var", v[1], u[1]))
                labels.add(("eps", u[1]))
                labels.add(("eps", v[1]))
    return sorted(labels)


@dataclass
class NielsenGraph:
    initial: tuple
    nodes: set
    edges: list  # (src, label, dst)
    succ: dict = field(default_factory=dict)

    def has_terminal(self) -> bool:
        return () in self.nodes


def build_graph(initial, node_cap=NODE_CAP) -> NielsenGraph:
    nodes = {initial}
    edges = []
    succ: dict = {initial: []}
    queue = [initial]
    while queue:
        node = queue.pop(0)
        if node == ():
            continue
        for label in _node_labels(node):
            dst = _apply(node, label)
            edges.append((node, label, dst))
            succ[node].append((label, dst))
            if dst not in nodes:
                if len(nodes) >= node_cap:
                    raise ResourceExceeded("nielsen graph node cap")
                nodes.add(dst)
                succ[dst] = []
                queue.append(dst)
    return NielsenGraph(initial, nodes, edges, succ)


def decide_sat(g: NielsenGraph) -> bool:
    return g.has_terminal()


# ---------------------------------------------------------------------------
# flattening and length lemmas


@dataclass
class FlatLemma:
    formula: Formula
    plan: list  # forward ops: ('edge', label) | ('loop', labels, k_name)
    frees: dict  # var -> intvar name
    exact: bool


def _core_subgraph(g: NielsenGraph):
    """Edges on some initial-to-terminal walk."""
    co = {()}
    changed = True
    while changed:
        changed = False
        for src, _lab, dst in g.edges:
            if dst in co and src not in co:
                co.add(src)
                changed = True
    reach = {g.initial}
    queue = [g.initial]
    while queue:
        n = queue.pop(0)
        for lab, dst in g.succ.get(n, ()):
            if dst not in reach:
                reach.add(dst)
                queue.append(dst)
    keep = co & reach
    edges = [(s, l, d) for s, l, d in g.edges if s in keep and d in keep]
    return keep, edges


def _has_long_cycle(nodes, edges) -> bool:
    index: dict = {}
    low: dict = {}
    on: set = set()
    stack: list = []
    counter = [0]
    sccs = []
    adj: dict = {n: [] for n in nodes}
    for s, _l, d in edges:
        adj[s].append(d)

    def strong(v):
        work = [(v, iter(adj[v]))]
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(comp)

    for n in nodes:
        if n not in index:
            strong(n)
    return any(len(c) >= 3 for c in sccs)


def length_lemmas(g: NielsenGraph, variables, schema_cap=SCHEMA_CAP):
    """One FlatLemma per flat sub-automaton, plus a completeness flag."""
    keep, edges = _core_subgraph(g)
    if () not in keep:
        return [], True
    complete = not _has_long_cycle(keep, edges)

    succ: dict = {n: [] for n in keep}
    self_loops: dict = {n: [] for n in keep}
    for s, l, d in edges:
        if s == d:
            self_loops[s].append([l])
        else:
            succ[s].append((l, d))
    # saturate 2-cycles as self-loops on the first location
    for s, l1, d in edges:
        if s == d:
            continue
        for l2, back in succ.get(d, ()):
            if back == s:
                self_loops[s].append([l1, l2])

    paths = []
    truncated = [False]

    def dfs(node, path_nodes, path_edges):
        if len(paths) >= schema_cap:
            truncated[0] = True
            return
        if node == ():
            paths.append((list(path_nodes), list(path_edges)))
            return
        for l, d in succ[node]:
            if d in path_nodes:
                continue
            path_nodes.append(d)
            path_edges.append(l)
            dfs(d, path_nodes, path_edges)
            path_nodes.pop()
            path_edges.pop()

    dfs(g.initial, [g.initial], [])
    if truncated[0]:
        complete = False

    lemmas = []
    fresh = [0]
    for path_nodes, path_edges in paths:
        lemma, exact = _flat_to_lia(
            path_nodes, path_edges, self_loops, variables, fresh
        )
        if not exact:
            complete = False
        lemmas.append(lemma)
    return lemmas, complete


def _flat_to_lia(path_nodes, path_edges, self_loops, variables, fresh) -> tuple:
    plan = []
    for j, node in enumerate(path_nodes):
        for cycle in self_loops.get(node, ()):
            fresh[0] += 1
            plan.append(("loop", cycle, f"%nk{fresh[0]}"))
        if j < len(path_edges):
            plan.append(("edge", path_edges[j]))

    frees = {}
    c: dict = {}
    constraints = []
    exact = True
    for x in variables:
        fresh[0] += 1
        name = f"%nf{fresh[0]}"
        frees[x] = name
        c[x] = Lin.intvar(name)
        constraints.append(LinLe(Lin.intvar(name).scale(-1)))

    kept_plan = []
    for op in reversed(plan):
        if op[0] == "edge":
            label = op[1]
            if label[0] == "eps":
                c[label[1]] = Lin.const_of(0)
            elif label[0] == "sym":
                c[label[1]] = c[label[1]].add(Lin.const_of(1))
            else:
                _, x, y = label
                c[x] = c[x].add(c[y])
            kept_plan.append(op)
            continue
        _, cycle, k_name = op
        # only pure-increment cycles admit a linear loop summary
        if any(l[0] != "sym" for l in cycle):
            exact = False
            continue
        incr: dict = {}
        for l in cycle:
            incr[l[1]] = incr.get(l[1], 0) + 1
        k = Lin.intvar(k_name)
        constraints.append(LinLe(k.scale(-1)))
        for x, u in incr.items():
            c[x] = c[x].add(k.scale(u))
        kept_plan.append(op)
    kept_plan.reverse()

    for x in variables:
        constraints.append(LinEq.of(Lin.lenvar(x).sub(c[x])))
    return FlatLemma(fand(constraints), kept_plan, frees, exact), exact


def replay_model(lemma: FlatLemma, lia_model, variables, table):
    """Concrete words realizing a LIA model of one flat lemma."""
    pad = table.concretize(0) if table.num_symbols else ord("a")
    vals = {}
    for x in variables:
        v = lia_model.get(("iv", lemma.frees[x]), 0)
        vals[x] = (pad,) * v
    ops = []
    for op in lemma.plan:
        if op[0] == "edge":
            ops.append(op[1])
        else:
            _, cycle, k_name = op
            k = lia_model.get(("iv", k_name), 0)
            ops.extend(cycle * k)
    for label in reversed(ops):
        if label[0] == "eps":
            vals[label[1]] = ()
        elif label[0] == "sym":
            _, x, code = label
            vals[x] = (code,) + vals[x]
        else:
            _, x, y = label
            vals[x] = vals[y] + vals[x]
    return vals
