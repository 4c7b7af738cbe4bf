"""Nondeterministic finite automata over integer symbol codes.

Automata are immutable after construction and epsilon-free.  All the
Boolean/rational operations, antichain inclusion, simulation reduction,
word extraction and the semilinear length abstraction live here; the inner
loops are delegated to the kernel module (compiled when available).
"""

from __future__ import annotations

import os
from functools import cached_property

if os.environ.get("STRSAT_KERNEL") == "pure":
    from strsat.nfa import _kernels as _k

    KERNEL_IMPL = "pure"
else:
    try:
        from strsat.nfa import _kernels_c as _k  # type: ignore

        KERNEL_IMPL = "compiled"
    except ImportError:
        from strsat.nfa import _kernels as _k

        KERNEL_IMPL = "pure"

# hard bound on the subset-sequence iteration of length_set
_LENGTH_SET_STEP_GUARD = 1 << 22


class Nfa:
    """An NFA with states 0..n-1 over symbols 0..num_symbols-1."""

    __slots__ = ("n", "num_symbols", "trans", "initial", "final", "__dict__")

    def __init__(self, n, num_symbols, trans, initial, final):
        self.n = n
        self.num_symbols = num_symbols
        self.trans = tuple(sorted(set(trans)))
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        for s, a, t in self.trans:
            assert 0 <= s < n and 0 <= t < n and 0 <= a < num_symbols
        assert all(0 <= s < n for s in self.initial)
        assert all(0 <= s < n for s in self.final)

    # -- construction helpers -------------------------------------------

    @staticmethod
    def empty(num_symbols: int) -> "Nfa":
        return Nfa(0, num_symbols, (), (), ())

    @staticmethod
    def epsilon(num_symbols: int) -> "Nfa":
        return Nfa(1, num_symbols, (), (0,), (0,))

    @staticmethod
    def from_word(word, num_symbols: int) -> "Nfa":
        trans = [(i, a, i + 1) for i, a in enumerate(word)]
        return Nfa(len(word) + 1, num_symbols, trans, (0,), (len(word),))

    @staticmethod
    def one_of(symbols, num_symbols: int) -> "Nfa":
        """Accepts exactly the one-letter words over the given symbols."""
        return Nfa(2, num_symbols, [(0, a, 1) for a in symbols], (0,), (1,))

    @staticmethod
    def universal(num_symbols: int) -> "Nfa":
        trans = [(0, a, 0) for a in range(num_symbols)]
        return Nfa(1, num_symbols, trans, (0,), (0,))

    # -- basic structure ------------------------------------------------

    @cached_property
    def succ(self):
        succ: dict = {}
        for s, a, t in self.trans:
            succ.setdefault(s, {}).setdefault(a, []).append(t)
        for row in succ.values():
            for a in row:
                row[a] = tuple(row[a])
        return succ

    @cached_property
    def pred(self):
        pred: dict = {}
        for s, a, t in self.trans:
            pred.setdefault(t, {}).setdefault(a, []).append(s)
        for row in pred.values():
            for a in row:
                row[a] = tuple(row[a])
        return pred

    def accepts(self, word) -> bool:
        cur = self.initial
        for a in word:
            nxt = set()
            for s in cur:
                row = self.succ.get(s)
                if row:
                    nxt.update(row.get(a, ()))
            cur = nxt
            if not cur:
                return False
        return bool(cur & self.final)

    @cached_property
    def useful_states(self):
        fwd = _k.forward_reachable(self.succ, self.initial)
        bwd = _k.forward_reachable(self.pred, self.final)
        return fwd & bwd

    def is_empty(self) -> bool:
        return not self.useful_states

    def trim(self) -> "Nfa":
        useful = self.useful_states
        if len(useful) == self.n and len(self.initial) and len(self.final):
            if all(
                s in useful and t in useful for s, _, t in self.trans
            ):
                return self
        remap = {s: i for i, s in enumerate(sorted(useful))}
        trans = [
            (remap[s], a, remap[t])
            for s, a, t in self.trans
            if s in useful and t in useful
        ]
        return Nfa(
            len(remap),
            self.num_symbols,
            trans,
            [remap[s] for s in self.initial if s in useful],
            [remap[s] for s in self.final if s in useful],
        )

    # -- rational operations --------------------------------------------

    def union(self, other: "Nfa") -> "Nfa":
        assert self.num_symbols == other.num_symbols
        off = self.n
        trans = list(self.trans) + [
            (s + off, a, t + off) for s, a, t in other.trans
        ]
        return Nfa(
            self.n + other.n,
            self.num_symbols,
            trans,
            list(self.initial) + [s + off for s in other.initial],
            list(self.final) + [s + off for s in other.final],
        )

    def concat(self, other: "Nfa") -> "Nfa":
        """Concatenation without epsilon transitions: final states of self
        take over the outgoing transitions of other's initial states."""
        assert self.num_symbols == other.num_symbols
        off = self.n
        trans = list(self.trans) + [
            (s + off, a, t + off) for s, a, t in other.trans
        ]
        for f in self.final:
            for s in other.initial:
                row = other.succ.get(s)
                if row:
                    for a, ts in row.items():
                        for t in ts:
                            trans.append((f, a, t + off))
        final = [s + off for s in other.final]
        if other.initial & other.final:
            final.extend(self.final)
        return Nfa(self.n + other.n, self.num_symbols, trans, self.initial, final)

    def star(self) -> "Nfa":
        """Kleene star; a fresh initial-final state closes the loop."""
        new = self.n
        trans = list(self.trans)
        for s in self.initial:
            row = self.succ.get(s)
            if row:
                for a, ts in row.items():
                    for t in ts:
                        trans.append((new, a, t))
        loop_sources = set(self.final) | {new}
        for f in loop_sources:
            for s in self.initial:
                row = self.succ.get(s)
                if row:
                    for a, ts in row.items():
                        for t in ts:
                            trans.append((f, a, t))
        final = set(self.final) | {new}
        return Nfa(self.n + 1, self.num_symbols, trans, (new,), final)

    def plus(self) -> "Nfa":
        return self.concat(self.star())

    def opt(self) -> "Nfa":
        return self.union(Nfa.epsilon(self.num_symbols))

    def intersect(self, other: "Nfa") -> "Nfa":
        assert self.num_symbols == other.num_symbols
        pairs, inits, trans = _k.product_intersect(
            self.succ, sorted(self.initial), other.succ, sorted(other.initial)
        )
        final = [
            i
            for i, (p, q) in enumerate(pairs)
            if p in self.final and q in other.final
        ]
        return Nfa(len(pairs), self.num_symbols, trans, inits, final).trim()

    def determinize(self, complete: bool = False) -> "Nfa":
        order, trans = _k.subset_construct(self.succ, sorted(self.initial))
        final = [i for i, macro in enumerate(order) if macro & self.final]
        n = len(order)
        if complete:
            sink = None
            have = {}
            for s, a, _t in trans:
                have.setdefault(s, set()).add(a)
            extra = []
            for s in range(n):
                missing = set(range(self.num_symbols)) - have.get(s, set())
                if missing:
                    if sink is None:
                        sink = n
                    for a in missing:
                        extra.append((s, a, sink))
            if sink is not None:
                for a in range(self.num_symbols):
                    extra.append((sink, a, sink))
                n += 1
            trans = list(trans) + extra
        return Nfa(n, self.num_symbols, trans, (0,) if order else (), final)

    def complement(self) -> "Nfa":
        """Complement w.r.t. the table alphabet: determinize, complete,
        flip final states."""
        if not self.initial:
            return Nfa.universal(self.num_symbols)
        dfa = self.determinize(complete=True)
        final = [s for s in range(dfa.n) if s not in dfa.final]
        return Nfa(dfa.n, dfa.num_symbols, dfa.trans, dfa.initial, final)

    def minimize_dfa(self) -> "Nfa":
        """Moore's partition refinement; input must be a complete DFA."""
        dfa = self
        assert len(dfa.initial) <= 1
        if not dfa.initial:
            return Nfa.empty(self.num_symbols)
        succ = {}
        for s, a, t in dfa.trans:
            assert (s, a) not in succ, "minimize_dfa requires a DFA"
            succ[(s, a)] = t
        # class ids: 0 = nonfinal, 1 = final
        cls = [1 if s in dfa.final else 0 for s in range(dfa.n)]
        while True:
            sig = {}
            new_cls = []
            for s in range(dfa.n):
                key = (cls[s],) + tuple(
                    cls[succ[(s, a)]] if (s, a) in succ else -1
                    for a in range(dfa.num_symbols)
                )
                if key not in sig:
                    sig[key] = len(sig)
                new_cls.append(sig[key])
            if new_cls == cls:
                break
            cls = new_cls
        n = len(set(cls))
        trans = {(cls[s], a, cls[t]) for (s, a), t in succ.items()}
        init = [cls[next(iter(dfa.initial))]]
        final = sorted({cls[s] for s in dfa.final})
        return Nfa(n, dfa.num_symbols, trans, init, final).trim()

    def reduce_simulation(self) -> "Nfa":
        """Quotient by the maximal direct-simulation equivalence."""
        a = self.trim()
        if a.n <= 1:
            return a
        sim = _k.simulation_preorder(a.n, a.succ, sorted(a.final))
        cls = list(range(a.n))
        for p in range(a.n):
            for q in range(p):
                if sim[p][q] and sim[q][p]:
                    cls[p] = cls[q]
                    break
        remap = {}
        for s in range(a.n):
            remap.setdefault(cls[s], len(remap))
        trans = {(remap[cls[s]], x, remap[cls[t]]) for s, x, t in a.trans}
        init = {remap[cls[s]] for s in a.initial}
        final = {remap[cls[s]] for s in a.final}
        out = Nfa(len(remap), a.num_symbols, trans, init, final)
        assert out.n <= self.n
        return out

    # -- decision procedures --------------------------------------------

    def is_included(self, other: "Nfa") -> bool:
        assert self.num_symbols == other.num_symbols
        return _k.antichain_included(
            self.succ,
            sorted(self.initial),
            sorted(self.final),
            other.succ,
            sorted(other.initial),
            sorted(other.final),
        )

    def is_universal(self) -> bool:
        return Nfa.universal(self.num_symbols).is_included(self)

    def is_equivalent(self, other: "Nfa") -> bool:
        return self.is_included(other) and other.is_included(self)

    # -- words and lengths ----------------------------------------------

    def extract_word(self, length: int):
        """Some word of exactly the given length, or None."""
        if length < 0:
            return None
        # can_reach[r] = states from which a final state is r steps away
        can = [set(self.final)]
        for _ in range(length):
            prev = can[-1]
            layer = set()
            for t in prev:
                row = self.pred.get(t)
                if row:
                    for srcs in row.values():
                        layer.update(srcs)
            can.append(layer)
        starts = sorted(self.initial & can[length])
        if not starts:
            return None
        word = []
        state = starts[0]
        for r in range(length, 0, -1):
            row = self.succ.get(state, {})
            found = False
            for a in sorted(row):
                for t in sorted(row[a]):
                    if t in can[r - 1]:
                        word.append(a)
                        state = t
                        found = True
                        break
                if found:
                    break
            assert found
        return tuple(word)

    def length_set(self):
        """Semilinear set of accepted word lengths.

        Iterates the reachable-state-set sequence, recording acceptance at
        each length, and folds the detected lasso into arithmetic
        progressions (offset, period); period 0 denotes a singleton.
        """
        a = self.trim()
        if not a.initial:
            return ()
        seen = {}
        cur = frozenset(a.initial)
        sets = []
        accept = []
        steps = 0
        while cur not in seen:
            assert steps <= min(2 ** a.n, _LENGTH_SET_STEP_GUARD)
            seen[cur] = len(sets)
            sets.append(cur)
            accept.append(bool(cur & a.final))
            nxt = set()
            for s in cur:
                row = a.succ.get(s)
                if row:
                    for ts in row.values():
                        nxt.update(ts)
            cur = frozenset(nxt)
            steps += 1
        i = seen[cur]
        j = len(sets)
        period = j - i
        out = []
        for k in range(i):
            if accept[k]:
                out.append((k, 0))
        for k in range(i, j):
            if accept[k]:
                out.append((k, period))
        return tuple(out)

    # -- misc -----------------------------------------------------------

    def dump(self) -> str:
        """Line-based textual form (debugging only)."""
        lines = [
            "initial " + " ".join(map(str, sorted(self.initial))),
            "final " + " ".join(map(str, sorted(self.final))),
        ]
        lines.extend(f"{s} {a} {t}" for s, a, t in self.trans)
        return "\n".join(lines)

    def __repr__(self):
        return (
            f"Nfa(n={self.n}, syms={self.num_symbols}, "
            f"trans={len(self.trans)}, init={sorted(self.initial)}, "
            f"final={sorted(self.final)})"
        )
