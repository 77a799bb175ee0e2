"""Digit automata for p-adic path set fractals.

Every state is accepting and an infinite word is accepted when all of its
prefixes are readable.  States that start no infinite path are therefore
useless and get pruned before any analysis.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Sequence

from .transducer import CarryState, Transducer


class UniquenessViolated(AssertionError):
    pass


class StateBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Interior:
    """Intermediate state inside the digit chain of a multi-digit output block."""

    source: CarryState
    symbol: int
    position: int

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.source, self.symbol, self.position)))

    def __hash__(self):
        return self._hash

    def label(self) -> str:
        return f"{self.source.label()}|{self.symbol}.{self.position}"


def state_label(state) -> str:
    if hasattr(state, "label"):
        return state.label()
    return str(state)


class DigitNFA:
    """Digit-labelled multigraph with one initial state."""

    def __init__(self, p: int, states: Sequence[Hashable], initial, edges: Iterable[tuple]):
        self.p = p
        self.states = list(dict.fromkeys(states))
        self.initial = initial
        self.edges = list(dict.fromkeys(edges))
        self._succ: dict = {s: {} for s in self.states}
        for src, a, dst in self.edges:
            if not 0 <= a < p:
                raise ValueError(f"digit {a} outside alphabet of size {p}")
            self._succ[src].setdefault(a, set()).add(dst)

    def successors(self, state, a: int) -> set:
        return self._succ[state].get(a, set())

    def out_digits(self, state) -> list[int]:
        return sorted(self._succ[state])

    def is_deterministic(self) -> bool:
        return all(len(v) == 1 for succ in self._succ.values() for v in succ.values())

    def is_carry(self, state) -> bool:
        return not isinstance(state, Interior)

    def pruned(self) -> "DigitNFA":
        """Drop states that are unreachable or start no infinite path."""
        alive = _infinite_core(
            self.states, lambda s: [t for v in self._succ[s].values() for t in v]
        )
        if self.initial not in alive:
            return DigitNFA(self.p, [self.initial], self.initial, [])
        order = [self.initial]
        seen = {self.initial}
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for a in sorted(self._succ[s]):
                for t in sorted(self._succ[s][a], key=state_label):
                    if t in alive and t not in seen:
                        seen.add(t)
                        order.append(t)
                        queue.append(t)
        edges = [(s, a, t) for (s, a, t) in self.edges if s in seen and t in seen]
        return DigitNFA(self.p, order, self.initial, edges)

    def to_dot(self, name: str = "nfa") -> str:
        return _dot(name, self.states, self.initial, self.edges, state_label)


class DigitDFA:
    """Partial deterministic digit automaton with integer states 0..n-1.

    State 0 is initial.  ``provenance[i]`` records which states of the
    automaton it was built from (power-set construction, then unions under
    minimization).
    """

    def __init__(self, p: int, delta: Sequence[dict[int, int]], provenance: Sequence[frozenset]):
        self.p = p
        self.delta = [dict(sorted(d.items())) for d in delta]
        self.provenance = [frozenset(x) for x in provenance]
        self.initial = 0

    def __len__(self):
        return len(self.delta)

    @property
    def states(self) -> range:
        return range(len(self.delta))

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [(s, a, t) for s, d in enumerate(self.delta) for a, t in d.items()]

    def is_empty(self) -> bool:
        """True when no infinite word is accepted (only happens before pruning or for the empty language)."""
        return not self.delta[0]

    def read(self, word: Sequence[int], start: int = 0) -> int | None:
        q = start
        for a in word:
            q = self.delta[q].get(a)
            if q is None:
                return None
        return q

    def label(self, state: int) -> str:
        parts = sorted(self.provenance[state], key=state_label)
        return "{" + ", ".join(state_label(x) for x in parts) + "}"

    def edge_set_by_label(self) -> set[tuple[str, int, str]]:
        return {(self.label(s), a, self.label(t)) for (s, a, t) in self.edges}

    def to_nfa(self) -> DigitNFA:
        return DigitNFA(self.p, list(self.states), 0, self.edges)

    def to_dot(self, name: str = "dfa") -> str:
        return _dot(name, list(self.states), 0, self.edges, self.label)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "states": [self.label(s) for s in self.states],
            "initial": self.label(0),
            "edges": [[self.label(s), a, self.label(t)] for s, a, t in self.edges],
        }


def _dot(name, states, initial, edges, label) -> str:
    index = {s: i for i, s in enumerate(states)}
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  start [shape=point];"]
    for s, i in index.items():
        lines.append(f'  n{i} [shape=circle, label="{label(s)}"];')
    lines.append(f"  start -> n{index[initial]};")
    for s, a, t in edges:
        lines.append(f'  n{index[s]} -> n{index[t]} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- construction --------------------------------------------------------------


def to_nfa(t: Transducer) -> DigitNFA:
    """Forget the inputs; spell each k-digit output through k-1 interior states."""
    states: list = list(t.states)
    edges = []
    for tr in t.transitions:
        chain = [tr.source]
        for pos in range(1, len(tr.output)):
            mid = Interior(tr.source, tr.symbol, pos)
            states.append(mid)
            chain.append(mid)
        chain.append(tr.target)
        for pos, a in enumerate(tr.output):
            edges.append((chain[pos], a, chain[pos + 1]))
    return DigitNFA(t.ifs.p, states, t.initial, edges)


def _chunk_tables(succ_masks: list[list[int]], p: int) -> list[list[list[int]]]:
    """tables[a][c][b] = union of a-successors of the states in byte b of chunk c."""
    n = len(succ_masks)
    chunks = (n + 7) // 8
    tables = []
    for a in range(p):
        per_chunk = []
        for c in range(chunks):
            row = [0] * 256
            for b in range(1, 256):
                low = b & -b
                k = 8 * c + low.bit_length() - 1
                row[b] = row[b ^ low] | (succ_masks[k][a] if k < n else 0)
            per_chunk.append(row)
        tables.append(per_chunk)
    return tables


def subset_construction(n: DigitNFA, start: frozenset, max_states: int | None = None) -> DigitDFA:
    """Accessible power-set automaton from the state set ``start``, BFS order.

    Subsets are bitmasks over the NFA state order; successor sets are
    assembled a byte at a time from precomputed tables.
    """
    ids = {s: i for i, s in enumerate(n.states)}
    succ_masks = [
        [sum(1 << ids[t] for t in n.successors(s, a)) for a in range(n.p)] for s in n.states
    ]
    tables = _chunk_tables(succ_masks, n.p)
    width = len(tables[0]) if tables else 0
    first = sum(1 << ids[s] for s in start)
    index = {first: 0}
    order = [first]
    delta: list[dict[int, int]] = [{}]
    queue = deque([first])
    while queue:
        q = queue.popleft()
        i = index[q]
        chunks = [(c, b) for c, b in enumerate(q.to_bytes(width, "little")) if b]
        for a in range(n.p):
            table = tables[a]
            target = 0
            for c, b in chunks:
                target |= table[c][b]
            if not target:
                continue
            j = index.get(target)
            if j is None:
                j = index[target] = len(order)
                if max_states is not None and j >= max_states:
                    raise StateBudgetExceeded(f"power-set automaton exceeds {max_states} states")
                order.append(target)
                delta.append({})
                queue.append(target)
            delta[i][a] = j
    provenance = [_members(q, n.states) for q in order]
    return prune(DigitDFA(n.p, delta, provenance))


def _members(mask: int, states: list) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(states[low.bit_length() - 1])
        mask ^= low
    return frozenset(out)


def determinize(n: DigitNFA, max_states: int | None = None) -> DigitDFA:
    n = n.pruned()
    return subset_construction(n, frozenset([n.initial]), max_states)


def _infinite_core(states, succ) -> set:
    """States that start an infinite path: repeatedly strip out-degree-0 states."""
    pred: dict = {s: [] for s in states}
    out = {}
    for s in states:
        targets = succ(s)
        out[s] = len(targets)
        for t in targets:
            pred[t].append(s)
    dead = deque(s for s in states if out[s] == 0)
    alive = set(states)
    while dead:
        s = dead.popleft()
        alive.discard(s)
        for r in pred[s]:
            out[r] -= 1
            if out[r] == 0:
                dead.append(r)
    return alive


def prune(d: DigitDFA) -> DigitDFA:
    """Remove states with no infinite continuation or unreachable from 0; renumber BFS."""
    # parallel edges count once per digit, which is what out-degree needs here
    alive = _infinite_core(list(d.states), lambda s: list(d.delta[s].values()))
    if 0 not in alive:
        return DigitDFA(d.p, [{}], [d.provenance[0] if d.provenance else frozenset()])
    return _relabel(d, alive)


def _relabel(d: DigitDFA, alive: set[int], root: int = 0) -> DigitDFA:
    order = [root]
    new = {root: 0}
    queue = deque([root])
    while queue:
        s = queue.popleft()
        for a, t in d.delta[s].items():
            if t in alive and t not in new:
                new[t] = len(order)
                order.append(t)
                queue.append(t)
    delta = [{a: new[t] for a, t in d.delta[s].items() if t in new} for s in order]
    return DigitDFA(d.p, delta, [d.provenance[s] for s in order])


def minimize(d: DigitDFA) -> DigitDFA:
    """Moore partition refinement; a missing transition counts as its own class."""
    d = prune(d)
    n = len(d)
    block = [0] * n
    count = 1
    while True:
        signatures = {}
        new_block = []
        for s in range(n):
            sig = (block[s],) + tuple(
                block[d.delta[s][a]] if a in d.delta[s] else -1 for a in range(d.p)
            )
            new_block.append(signatures.setdefault(sig, len(signatures)))
        block = new_block
        if len(signatures) == count:
            break
        count = len(signatures)
    delta: list[dict[int, int]] = [{} for _ in range(count)]
    prov: list[set] = [set() for _ in range(count)]
    for s in range(n):
        b = block[s]
        prov[b] |= d.provenance[s]
        delta[b] = {a: block[t] for a, t in d.delta[s].items()}
    quotient = DigitDFA(d.p, delta, [frozenset(x) for x in prov])
    return _relabel(quotient, set(range(count)), root=block[0])


def dfa_from_ifs(ifs) -> DigitDFA:
    """Transducer, digit NFA and power-set DFA for an IFS (not minimized)."""
    from .transducer import build

    return determinize(to_nfa(build(ifs)))


# --- structure -------------------------------------------------------------------


def strongly_connected_components(nodes: Sequence[int], succ) -> list[frozenset]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[frozenset] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    return comps


@dataclass(frozen=True)
class ClassDecomposition:
    components: tuple[frozenset, ...]
    loop_classes: tuple[frozenset, ...]
    essential: tuple[frozenset, ...]
    condensation: frozenset  # (i, j) pairs of component indices

    def component_of(self, state) -> int:
        for i, c in enumerate(self.components):
            if state in c:
                return i
        raise KeyError(state)


def _succ_fn(a):
    if isinstance(a, DigitDFA):
        return lambda s: list(dict.fromkeys(a.delta[s].values()))
    return lambda s: list(dict.fromkeys(t for v in a._succ[s].values() for t in v))


def classes(a: DigitDFA | DigitNFA) -> ClassDecomposition:
    """Loop classes and essential classes (sinks of the condensation)."""
    nodes = list(a.states)
    succ = _succ_fn(a)
    comps = strongly_connected_components(nodes, succ)
    comps = sorted(comps, key=lambda c: min(nodes.index(s) for s in c))
    where = {s: i for i, c in enumerate(comps) for s in c}
    cond = set()
    loops = []
    for i, c in enumerate(comps):
        internal = False
        for s in c:
            for t in succ(s):
                if where[t] == i:
                    internal = True
                else:
                    cond.add((i, where[t]))
        if internal:
            loops.append(c)
    exits = {i for i, _ in cond}
    essential = [c for c in loops if comps.index(c) not in exits]
    return ClassDecomposition(tuple(comps), tuple(loops), tuple(essential), frozenset(cond))


@dataclass(frozen=True)
class EssentialReport:
    count: int
    classes: tuple[frozenset, ...]

    def __str__(self):
        return f"{self.count} essential class{'es' if self.count != 1 else ''}"


def assert_unique_essential(d: DigitDFA, from_self_similar: bool = True) -> EssentialReport:
    dec = classes(d)
    report = EssentialReport(len(dec.essential), dec.essential)
    if from_self_similar and report.count != 1:
        raise UniquenessViolated(f"IFS-derived automaton has {report}")
    return report


@dataclass(frozen=True)
class FullDimensionVerdict:
    full: bool
    state: int | None
    word: tuple[int, ...] | None
    spectral_radius: float

    def __bool__(self):
        return self.full


def shortest_word(d: DigitDFA, target: int) -> tuple[int, ...]:
    prev: dict[int, tuple[int, int] | None] = {0: None}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if s == target:
            break
        for a, t in d.delta[s].items():
            if t not in prev:
                prev[t] = (s, a)
                queue.append(t)
    word = []
    s = target
    while prev[s] is not None:
        s, a = prev[s]
        word.append(a)
    return tuple(reversed(word))


def is_full_dimension(d: DigitDFA, tol: float = 1e-12) -> FullDimensionVerdict:
    """Whether some state of the minimal DFA loops on every digit.

    The answer is cross-checked against the spectral radius being p.
    """
    from .spectral import adjacency, spectral_radius

    m = minimize(d)
    rho = spectral_radius(adjacency(m), tol)
    for q in m.states:
        if all(m.delta[q].get(a) == q for a in range(m.p)):
            if abs(rho - m.p) > 1e-9:
                raise AssertionError("full-digit loop found but spectral radius is not p")
            return FullDimensionVerdict(True, q, shortest_word(m, q), rho)
    if abs(rho - m.p) <= 1e-9:
        raise AssertionError("spectral radius is p but no state loops on every digit")
    return FullDimensionVerdict(False, None, None, rho)


def language_prefixes(a: DigitDFA | DigitNFA, depth: int) -> set[tuple[int, ...]]:
    """All digit strings of length ``depth`` readable from the initial state."""
    if isinstance(a, DigitDFA):
        if depth and not a.edges:
            return set()
        frontier = {(): 0}
        for _ in range(depth):
            frontier = {
                w + (x,): t for w, s in frontier.items() for x, t in a.delta[s].items()
            }
        return set(frontier)
    frontier_sets = {(): frozenset([a.initial])}
    for _ in range(depth):
        nxt = {}
        for w, qs in frontier_sets.items():
            for x in range(a.p):
                t = frozenset(u for s in qs for u in a.successors(s, x))
                if t:
                    nxt[w + (x,)] = t
        frontier_sets = nxt
    return set(frontier_sets)


# --- automaton exchange files --------------------------------------------------


def _smallest_prime_above(n: int) -> int:
    q = max(2, n + 1)
    while any(q % r == 0 for r in range(2, int(q**0.5) + 1)):
        q += 1
    return q


def nfa_from_dict(data: dict) -> DigitNFA:
    edges = [(str(s), int(a), str(t)) for s, a, t in data["edges"]]
    p = data.get("p")
    if p is None:
        p = _smallest_prime_above(max((a for _, a, _ in edges), default=0))
    states = [str(s) for s in data.get("states", [])]
    states += [s for e in edges for s in (e[0], e[2])]
    return DigitNFA(int(p), states, str(data["initial"]), edges)


def load_automaton(path: str | Path) -> DigitNFA:
    with open(path) as fh:
        return nfa_from_dict(json.load(fh))
