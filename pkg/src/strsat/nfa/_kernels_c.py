"""Hot-path automata kernels.

This module is the single source for the inner loops of the NFA engine:
reachability, product construction, subset construction, antichain-based
inclusion and the simulation-preorder fixpoint.  It is written so that the
same file compiles unchanged with Cython (pure-Python mode) into
``strsat.nfa._kernels_c``; ``strsat.nfa.automaton`` picks the compiled
variant when available.

Successor maps are plain ``dict[int, dict[int, tuple[int, ...]]]``
(source -> symbol -> targets).
"""


def forward_reachable(succ, starts):
    """States reachable from ``starts`` following transitions forward."""
    seen = set(starts)
    stack = list(starts)
    while stack:
        s = stack.pop()
        row = succ.get(s)
        if row is None:
            continue
        for targets in row.values():
            for t in targets:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return seen


def product_intersect(succ_a, inits_a, succ_b, inits_b):
    """Synchronous product restricted to reachable pairs.

    Returns (pairs, init_indices, transitions) where ``pairs[i]`` is the
    (a_state, b_state) pair represented by product state ``i``.
    """
    index = {}
    pairs = []
    inits = []
    for p in inits_a:
        for q in inits_b:
            key = (p, q)
            if key not in index:
                index[key] = len(pairs)
                pairs.append(key)
            inits.append(index[key])
    trans = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        ra = succ_a.get(p)
        rb = succ_b.get(q)
        if ra and rb:
            for sym, ts_a in ra.items():
                ts_b = rb.get(sym)
                if ts_b:
                    for ta in ts_a:
                        for tb in ts_b:
                            key = (ta, tb)
                            j = index.get(key)
                            if j is None:
                                j = len(pairs)
                                index[key] = j
                                pairs.append(key)
                            trans.append((i, sym, j))
        i += 1
    return pairs, inits, trans


def subset_construct(succ, inits):
    """Subset construction from the initial state set.

    Returns (macrostates, transitions); macrostates are frozensets, state 0
    is the initial macrostate.  Only reachable macrostates are produced and
    the empty macrostate appears only if some symbol leads to it explicitly
    (completion is the caller's business).
    """
    start = frozenset(inits)
    index = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        agg = {}
        for s in order[i]:
            row = succ.get(s)
            if row:
                for sym, ts in row.items():
                    acc = agg.get(sym)
                    if acc is None:
                        agg[sym] = set(ts)
                    else:
                        acc.update(ts)
        for sym in sorted(agg):
            f = frozenset(agg[sym])
            j = index.get(f)
            if j is None:
                j = len(order)
                index[f] = j
                order.append(f)
            trans.append((i, sym, j))
        i += 1
    return order, trans


def antichain_included(succ_a, inits_a, fins_a, succ_b, inits_b, fins_b):
    """Antichain-based check of L(A) <= L(B).

    Explores pairs (a_state, B_macrostate) of the on-the-fly product of A
    with the determinization of B, pruning pairs subsumed by an already
    visited pair with the same a_state and a smaller macrostate.
    """
    fa = set(fins_a)
    fb = set(fins_b)
    start = frozenset(inits_b)
    antichains = {}

    def push(p, macro):
        lst = antichains.get(p)
        if lst is None:
            antichains[p] = [macro]
            return True
        for other in lst:
            if other <= macro:
                return False
        antichains[p] = [m for m in lst if not macro <= m]
        antichains[p].append(macro)
        return True

    work = []
    if not start & fb:
        for p in inits_a:
            if p in fa:
                return False
    for p in inits_a:
        if push(p, start):
            work.append((p, start))
    while work:
        p, macro = work.pop()
        row = succ_a.get(p)
        if not row:
            continue
        for sym, ts in row.items():
            nxt = set()
            for s in macro:
                rb = succ_b.get(s)
                if rb:
                    tb = rb.get(sym)
                    if tb:
                        nxt.update(tb)
            nxt_f = frozenset(nxt)
            accepting = bool(nxt & fb)
            for t in ts:
                if t in fa and not accepting:
                    return False
                if push(t, nxt_f):
                    work.append((t, nxt_f))
    return True


def simulation_preorder(n, succ, fins):
    """Direct (forward) simulation preorder by fixpoint refinement.

    Returns a list ``sim`` of n lists of booleans; ``sim[p][q]`` means q
    simulates p.  Quotienting by the induced equivalence preserves the
    language.  Rows are refined as integer bitmasks.
    """
    rows = [succ.get(s) or {} for s in range(n)]
    # succmask[q][sym]: bitmask of q's successors on sym
    succmask = []
    for q in range(n):
        m = {}
        for sym, tqs in rows[q].items():
            acc = 0
            for t in tqs:
                acc |= 1 << t
            m[sym] = acc
        succmask.append(m)
    finmask = 0
    for f in fins:
        finmask |= 1 << f
    full = (1 << n) - 1
    sim = [full if not (1 << p) & finmask else finmask for p in range(n)]
    changed = True
    while changed:
        changed = False
        for p in range(n):
            rp = rows[p]
            if not rp:
                continue
            cand = sim[p]
            q = 0
            rest = cand
            while rest:
                low = rest & -rest
                rest ^= low
                q = low.bit_length() - 1
                if p == q:
                    continue
                mq = succmask[q]
                ok = True
                for sym, tps in rp.items():
                    tq_mask = mq.get(sym, 0)
                    if not tq_mask:
                        ok = False
                        break
                    for tp in tps:
                        if not sim[tp] & tq_mask:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    cand ^= low
                    changed = True
            sim[p] = cand
    return [[bool(sim[p] >> q & 1) for q in range(n)] for p in range(n)]
