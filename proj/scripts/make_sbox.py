#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Synthesize fixtures/present_sbox.net: the PRESENT cipher S-box as exactly
20 two-input gates drawn from {AND, OR, NAND, NOR, XOR, XNOR}.

Construction rules enforced here:
  * every gate reads two distinct earlier signals and drives at least one
    gate or primary output; the four outputs are driven by four distinct
    gates;
  * within the core logic no two signals are equal or complementary on all
    16 inputs, and every gate's 16-row trace has exactly one pointwise
    explanation (function plus pin-value pair) over the whole signal pool,
    so fault-free full probing pins the core wiring exactly;
  * on top of the core, XOR rewire pairs (w1 = w ^ u, w2 = w1 ^ u, hence
    w2 = w on every input) pad the circuit to 20 gates, and one consumer of
    w is repointed at w2. Swapping that consumer back is invisible to
    fault-free probing, making probe-only recovery provably ambiguous, while
    a stuck-at fault on w1 or w2 separates the two wirings.

The script re-verifies all of the above exhaustively before writing the file.
"""

import itertools
import sys

SBOX = [0xC, 5, 6, 0xB, 9, 0, 0xA, 0xD, 3, 0xE, 0xF, 8, 4, 7, 1, 2]
FULL = 0xFFFF

FUNCS = {
    "AND": (lambda a, b: a & b, "0001"),
    "OR": (lambda a, b: a | b, "0111"),
    "NAND": (lambda a, b: FULL & ~(a & b), "1110"),
    "NOR": (lambda a, b: FULL & ~(a | b), "1000"),
    "XOR": (lambda a, b: a ^ b, "0110"),
    "XNOR": (lambda a, b: FULL & ~(a ^ b), "1001"),
}

PI_MASKS = [sum(((x >> i) & 1) << x for x in range(16)) for i in range(4)]
TARGETS = [sum(((SBOX[x] >> j) & 1) << x for x in range(16)) for j in range(4)]


def fresh(m, pool):
    return m not in (0, FULL) and all(
        m != p and m != (FULL & ~p) for p in pool)


def tree_nodes(tree, acc):
    """Canonical gate nodes of a provenance tree (children sorted); returns
    the canonical key of the root."""
    if tree[0] == "pi":
        return tree
    fname, ta, tb = tree
    ca, cb = tree_nodes(ta, acc), tree_nodes(tb, acc)
    key = (fname, *sorted((ca, cb), key=repr))
    acc.add(key)
    return key


_size_memo = {}


def tree_size(tree):
    if tree not in _size_memo:
        acc = set()
        tree_nodes(tree, acc)
        _size_memo[tree] = len(acc)
    return _size_memo[tree]


def build_pool(depth):
    """One smallest provenance tree per mask reachable within `depth` levels
    of gates from the inputs. Tree: ('pi', i) or (fname, tree_a, tree_b)."""
    pool = {PI_MASKS[i]: ("pi", i) for i in range(4)}
    for _ in range(depth):
        items = sorted(pool.items())
        for (ma, ta), (mb, tb) in itertools.combinations(items, 2):
            floor = max(tree_size(ta), tree_size(tb)) + 1  # full sharing
            for fname in sorted(FUNCS):
                m = FUNCS[fname][0](ma, mb)
                if m in (0, FULL):
                    continue
                if m in pool and tree_size(pool[m]) <= floor:
                    continue  # cannot beat the stored tree
                t = (fname, ta, tb)
                if m not in pool or tree_size(t) < tree_size(pool[m]):
                    pool[m] = t
    return pool


def decompositions(pool, target, cap):
    """(top function, tree_a, tree_b) with f(a, b) == target pointwise,
    ranked by shared gate count of the whole expression."""
    out = []
    masks = sorted(pool)
    by_size = sorted(masks, key=lambda m: (tree_size(pool[m]), m))

    def scan(t, combine, keep):
        side = [m for m in by_size if keep(m, t)][:400]
        for ma, mb in itertools.combinations(side, 2):
            if combine(ma, mb) == t:
                yield ma, mb

    for ma in masks:
        need = ma ^ target
        if need > ma and need in pool:
            out.append(("XOR", pool[ma], pool[need]))
        need = FULL & ~(ma ^ target)
        if need > ma and need in pool:
            out.append(("XNOR", pool[ma], pool[need]))
    for ma, mb in scan(target, lambda a, b: a & b, lambda m, t: (m & t) == t):
        out.append(("AND", pool[ma], pool[mb]))
    for ma, mb in scan(FULL & ~target, lambda a, b: a & b,
                       lambda m, t: (m & t) == t):
        out.append(("NAND", pool[ma], pool[mb]))
    for ma, mb in scan(target, lambda a, b: a | b, lambda m, t: (m | t) == t):
        out.append(("OR", pool[ma], pool[mb]))
    for ma, mb in scan(FULL & ~target, lambda a, b: a | b,
                       lambda m, t: (m | t) == t):
        out.append(("NOR", pool[ma], pool[mb]))

    out.sort(key=lambda d: (tree_size(d), repr(d)))
    return out[:cap]


def core_candidates(count):
    """Gate-DAG candidates (node set + per-output top node), smallest first:
    pick one decomposition per output bit, greedily minimizing the union."""
    pool = build_pool(3)
    decomps = [decompositions(pool, t, 400) for t in TARGETS]
    assert all(decomps), "some output bit has no decomposition"
    results = []
    for first in range(4):
        for d_first in decomps[first][:80]:
            acc = set()
            top = tree_nodes(d_first, acc)
            for order in itertools.permutations(range(4)):
                if order[0] != first:
                    continue
                nodes = set(acc)
                tops = {first: top}
                for j in order[1:]:
                    pick = None
                    for d in decomps[j]:
                        trial = set(nodes)
                        t = tree_nodes(d, trial)
                        if pick is None or len(trial) < len(pick[0]):
                            pick = (trial, t)
                    nodes, tops[j] = pick
                results.append((len(nodes), repr(sorted(nodes, key=repr)),
                                nodes, tops))
    results.sort(key=lambda r: (r[0], r[1]))
    seen = set()
    out = []
    for _, key, nodes, tops in results:
        if key not in seen:
            seen.add(key)
            out.append((nodes, tops))
        if len(out) == count:
            break
    return out


class Circuit:
    def __init__(self):
        self.gates = []  # (name, fname, pin_a, pin_b); pins are signal names
        self.outputs = {}  # output name -> signal name

    def add(self, fname, a, b):
        name = f"g{len(self.gates)}"
        self.gates.append((name, fname, a, b))
        return name

    def values(self, x, fault=None):
        """All signal values on input index x; fault = (gate name, value)."""
        v = {f"x{i}": (x >> i) & 1 for i in range(4)}
        for name, fname, a, b in self.gates:
            fn = FUNCS[fname][0]
            bit = 1 if fn(FULL if v[a] else 0, FULL if v[b] else 0) & 1 else 0
            if fault and fault[0] == name:
                bit = fault[1]
            v[name] = bit
        return v

    def consumers(self, signal):
        out = [g[0] for g in self.gates if signal in (g[2], g[3])]
        out += [o for o, s in self.outputs.items() if s == signal]
        return out

    def masks(self):
        m = {f"x{i}": PI_MASKS[i] for i in range(4)}
        for name, fname, a, b in self.toposorted():
            m[name] = FUNCS[fname][0](m[a], m[b])
        return m

    def toposorted(self):
        placed = {f"x{i}" for i in range(4)}
        order = []
        pending = list(self.gates)
        while pending:
            rest = []
            for g in pending:
                if g[2] in placed and g[3] in placed:
                    order.append(g)
                    placed.add(g[0])
                else:
                    rest.append(g)
            assert len(rest) < len(pending), "cycle"
            pending = rest
        return order

    def renumber(self):
        """Topologically order the gate list and rename gates g0..gN in that
        order. Returns the old-name -> new-name map."""
        order = self.toposorted()
        remap = {f"x{i}": f"x{i}" for i in range(4)}
        for pos, g in enumerate(order):
            remap[g[0]] = f"g{pos}"
        self.gates = [(remap[n], f, remap[a], remap[b]) for n, f, a, b in order]
        self.outputs = {o: remap[s] for o, s in self.outputs.items()}
        return remap

    def emit(self):
        lines = [
            "# PRESENT cipher S-box (input index -> C56B90AD3EF84712) as",
            "# twenty two-input gates over AND, OR, NAND, NOR, XOR and XNOR.",
            "# The trailing XOR rewire pairs keep one signal and a functional",
            "# duplicate of it alive at once, so fault-free probing cannot",
            "# tell their consumers apart; a stuck-at fault on a pair gate",
            "# separates the wirings.",
            "input x0 x1 x2 x3",
            "output y0 y1 y2 y3",
            "",
        ]
        for name, fname, a, b in self.gates:
            lines.append(f"gate {name} tt:{FUNCS[fname][1]} {a} {b}")
        lines.append("")
        for o in ("y0", "y1", "y2", "y3"):
            lines.append(f"connect {o} {self.outputs[o]}")
        return "\n".join(lines) + "\n"


def instantiate(nodes, tops):
    """Topologically order the canonical DAG nodes and name them g0..gN."""
    order = []
    placed = set()
    while len(order) < len(nodes):
        progress = False
        for n in sorted(nodes, key=repr):
            if n in placed:
                continue
            if all(c in placed for c in n[1:] if c[0] != "pi"):
                order.append(n)
                placed.add(n)
                progress = True
        assert progress, "cycle in canonical DAG"
    c = Circuit()
    name_of = {("pi", i): f"x{i}" for i in range(4)}
    for n in order:
        name_of[n] = c.add(n[0], name_of[n[1]], name_of[n[2]])
    for j in range(4):
        c.outputs[f"y{j}"] = name_of[tops[j]]
    return c


def add_rewire_pairs(c, count):
    """Append `count` XOR pairs, each on a distinct multi-consumer host, and
    repoint one gate consumer per pair. Returns (w, w1, w2, moved) tuples."""
    pairs = []
    masks = c.masks()
    core = list(c.gates)
    for w, _, wa, wb in core:
        if len(pairs) == count:
            break
        gate_consumers = [g[0] for g in c.gates if w in (g[2], g[3])]
        if len(c.consumers(w)) < 2 or not gate_consumers:
            continue
        mate = None
        for i in range(4):
            u = f"x{i}"
            if u in (wa, wb):
                continue
            if fresh(masks[w] ^ masks[u], masks.values()):
                mate = u
                break
        if mate is None:
            continue
        moved = gate_consumers[0]
        w1 = c.add("XOR", w, mate)
        w2 = c.add("XOR", w1, mate)
        for i, (name, fname, a, b) in enumerate(c.gates):
            if name == moved:
                c.gates[i] = (name, fname, w2 if a == w else a,
                              w2 if b == w else b)
                break
        masks[w1] = masks[w] ^ masks[mate]
        masks[w2] = masks[w]
        pairs.append((w, w1, w2, moved))
    assert len(pairs) == count, f"placed {len(pairs)} of {count} pairs"
    return pairs


def verify(c):
    assert len(c.gates) == 20, f"{len(c.gates)} gates"
    defined = {f"x{i}" for i in range(4)}
    for name, fname, a, b in c.gates:
        assert a != b, f"{name} ties its pins"
        assert fname in FUNCS, f"{name} function off the whitelist"
        assert a in defined and b in defined, f"{name} reads a later signal"
        defined.add(name)
    for name, _, _, _ in c.gates:
        assert c.consumers(name), f"{name} drives nothing"
    drivers = [c.outputs[f"y{j}"] for j in range(4)]
    gate_names = {g[0] for g in c.gates}
    assert len(set(drivers)) == 4 and set(drivers) <= gate_names
    for x in range(16):
        v = c.values(x)
        got = sum(v[c.outputs[f"y{j}"]] << j for j in range(4))
        assert got == SBOX[x], f"S[{x}] = {got:x}, want {SBOX[x]:x}"


def verify_pair_ambiguity(c, w, w2, moved):
    """The consumer swap must be invisible to fault-free full probing."""
    swapped = Circuit()
    swapped.outputs = dict(c.outputs)
    swap = lambda s: w2 if s == w else w if s == w2 else s
    swapped.gates = [
        (n, f, swap(a), swap(b)) if n == moved else (n, f, a, b)
        for n, f, a, b in c.gates
    ]
    for x in range(16):
        assert c.values(x) == swapped.values(x), f"pair visible on input {x}"


def excess_explanations(c, pairs):
    """How many (function, pin-mask pair) explanations each gate's 16-row
    trace admits beyond the intended ones. Alternative pointwise wirings are
    all separable by a stuck-at fault on one of their pins, so this is only
    used to rank candidate circuits, preferring sparse rewiring freedom."""
    masks = c.masks()
    hosted = {masks[w] for w, _, _, _ in pairs}
    excess = 0
    for name, fname, a, b in c.gates:
        target = masks[name]
        expl = set()
        for sa, sb in itertools.combinations(sorted(masks), 2):
            if name in (sa, sb):
                continue
            for fn_name in FUNCS:
                if FUNCS[fn_name][0](masks[sa], masks[sb]) == target:
                    expl.add((fn_name, frozenset((masks[sa], masks[sb]))))
        excess += max(0, len(expl) - (2 if target in hosted else 1))
    return excess


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "fixtures/present_sbox.net"
    which = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    done = []
    memo = {("pi", i): PI_MASKS[i] for i in range(4)}

    def mask_of(node):
        if node not in memo:
            memo[node] = FUNCS[node[0]][0](mask_of(node[1]), mask_of(node[2]))
        return memo[node]

    for nodes, tops in core_candidates(60):
        core_masks = [mask_of(n) for n in nodes]
        pool = list(PI_MASKS) + core_masks
        if any(not fresh(pool[i], pool[:i] + pool[i + 1:])
               for i in range(4, len(pool))):
            continue
        need = 20 - len(nodes)
        if need < 2 or need % 2:
            continue
        c = instantiate(nodes, tops)
        try:
            pairs = add_rewire_pairs(c, need // 2)
        except AssertionError:
            continue
        remap = c.renumber()
        pairs = [tuple(remap[name] for name in p) for p in pairs]
        verify(c)
        for w, _, w2, moved in pairs:
            verify_pair_ambiguity(c, w, w2, moved)
        done.append((excess_explanations(c, pairs), len(done), c, pairs))

    if not done:
        print("no candidate core survived verification", file=sys.stderr)
        return 1
    done.sort(key=lambda d: d[:2])
    excess, _, c, pairs = done[min(which, len(done) - 1)]
    with open(out_path, "w") as f:
        f.write(c.emit())
    print(f"wrote {out_path}: 20 gates ({20 - 2 * len(pairs)} core + "
          f"{len(pairs)} rewire pairs), rewiring freedom score {excess}, "
          f"candidate {min(which, len(done) - 1)} of {len(done)}")
    for w, w1, w2, moved in pairs:
        print(f"  pair {w1}/{w2} duplicates {w}; moved consumer {moved}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
