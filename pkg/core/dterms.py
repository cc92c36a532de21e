"""
Proof terms (D-terms): structural measures, compaction orderings, compacted
D-terms (proof DAGs with named lemmas) and level-wise enumeration.

A D-term is either a primitive label (a ``Constant``) or ``D(major, minor)``,
a ``Compound`` with functor ``D``. D-terms share the hash-consing table of
``core.terms``; two D-terms are equal iff they are the same object.
"""
import logging
import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from config.settings import COUNT_LIMITS, DETACHMENT, N_LABEL
from core.errors import CyclicLabels, NotCompound, ResourceLimit, UnknownLabel
from core.terms import Compound, Constant, Term

logger = logging.getLogger(__name__)

DTerm = Term


def prim(label: str) -> Constant:
    return Constant(str(label))


def D(major: DTerm, minor: DTerm) -> Compound:
    return Compound(DETACHMENT, (major, minor))


N = prim(N_LABEL)


def is_prim(d: DTerm) -> bool:
    return d.is_constant


def _cached(d: Compound, key: str, compute: Callable[[], object]):
    value = d._cache.get(key)
    if value is None:
        value = compute()
        d._cache[key] = value
    return value


# ---------------------------------------------------------------------------
# subterms and measures

def subeq(d: DTerm) -> FrozenSet[DTerm]:
    """Compound subterms of d, d itself included when compound."""
    if d.is_constant:
        return frozenset()
    major, minor = d.args
    return _cached(d, "subeq", lambda: frozenset((d,)) | subeq(major) | subeq(minor))


def sub(d: DTerm) -> FrozenSet[DTerm]:
    """Strict compound subterms of d."""
    return subeq(d) - {d}


def prims(d: DTerm) -> FrozenSet[str]:
    """Primitive labels occurring in d."""
    if d.is_constant:
        return frozenset((d.name,))
    return _cached(d, "prims", lambda: prims(d.args[0]) | prims(d.args[1]))


def axiom_prims(d: DTerm) -> FrozenSet[str]:
    """Primitive labels of d other than the n marker."""
    return prims(d) - {N_LABEL}


def subeq_preorder(d: DTerm) -> List[DTerm]:
    """Compound subterms in preorder of first occurrence, d first."""
    found: Dict[DTerm, None] = {}

    def walk(e: DTerm) -> None:
        if e.is_compound and e not in found:
            found[e] = None
            walk(e.args[0])
            walk(e.args[1])
    walk(d)
    return list(found)


def leaves_in_order(d: DTerm) -> List[DTerm]:
    """Distinct primitive leaves in left-to-right first-occurrence order."""
    found: Dict[DTerm, None] = {}
    seen: Set[DTerm] = set()

    def walk(e: DTerm) -> None:
        if e.is_constant:
            found.setdefault(e, None)
        elif e not in seen:
            seen.add(e)
            walk(e.args[0])
            walk(e.args[1])
    walk(d)
    return list(found)


def contains(d: DTerm, e: DTerm) -> bool:
    """d ⊵ e: e is a subterm of d (primitive leaves included)."""
    if e.is_constant:
        return e.name in prims(d)
    return e in subeq(d)


def strictly_contains(d: DTerm, e: DTerm) -> bool:
    """d ▷ e."""
    return d is not e and contains(d, e)


def t_size(d: DTerm) -> int:
    return d.size


def height(d: DTerm) -> int:
    return d.height


def c_size(d: DTerm) -> int:
    return len(subeq(d))


def c_size_of(ds: Iterable[DTerm]) -> int:
    """Compacted size of a set of D-terms."""
    union: Set[DTerm] = set()
    for d in ds:
        union |= subeq(d)
    return len(union)


def sc_size(d: DTerm) -> int:
    """Sum of the compacted sizes of all subterms of d."""
    if d.is_constant:
        return 0
    return _cached(d, "sc", lambda: sum(c_size(e) for e in subeq(d)))


@dataclass(frozen=True)
class SizeReport:
    t_size: int
    height: int
    c_size: int
    sc_size: int

    def key(self) -> Tuple[int, int, int]:
        """Lexicographic termination measure ⟨c, sc, t⟩."""
        return (self.c_size, self.sc_size, self.t_size)


def measure(d: DTerm) -> SizeReport:
    return SizeReport(t_size(d), height(d), c_size(d), sc_size(d))


def is_prime(d: DTerm) -> bool:
    """No compound subterm occurs twice."""
    return t_size(d) == c_size(d)


def successive_heights(d: DTerm) -> Tuple[int, int]:
    """(DK_L, DK_R): longest runs of left / right edges on a root-leaf path."""
    runs: Dict[DTerm, Tuple[int, int]] = {}

    def walk(e: DTerm) -> Tuple[int, int]:
        if e.is_constant:
            return (0, 0)
        done = runs.get(e)
        if done is None:
            left, right = walk(e.args[0]), walk(e.args[1])
            done = (1 + left[0], 1 + right[1])
            runs[e] = done
        return done
    walk(d)
    if not runs:
        return (0, 0)
    return (max(r[0] for r in runs.values()), max(r[1] for r in runs.values()))


# ---------------------------------------------------------------------------
# compaction orderings

def c_geq(d: DTerm, e: DTerm) -> bool:
    """d ≥_c e: Sub(d) ⊇ Sub(e)."""
    return sub(d) >= sub(e)


def c_gt(d: DTerm, e: DTerm) -> bool:
    """d >_c e: Sub(d) ⊃ Sub(e)."""
    return sub(d) > sub(e)


def c_smaller_set(d: DTerm) -> List[DTerm]:
    """All e with d ≥_c e whose primitive labels occur in d.

    Raises:
        NotCompound: if d is primitive
    """
    if d.is_constant:
        raise NotCompound(f"{d} is primitive")
    parts = subeq_preorder(d)[1:] + leaves_in_order(d)
    result: Dict[DTerm, None] = {}
    for a in parts:
        for b in parts:
            result[D(a, b)] = None
    for leaf in leaves_in_order(d):
        result[leaf] = None
    return list(result)


def replace_all(d: DTerm, e: DTerm, replacement: DTerm) -> DTerm:
    """d[e ↦ replacement]: replace every occurrence of e."""
    memo: Dict[DTerm, DTerm] = {}

    def walk(x: DTerm) -> DTerm:
        if x is e:
            return replacement
        if x.is_constant:
            return x
        done = memo.get(x)
        if done is None:
            done = D(walk(x.args[0]), walk(x.args[1]))
            memo[x] = done
        return done
    return walk(d)


# ---------------------------------------------------------------------------
# compacted D-terms

class CompactedDTerm:
    """Acyclic mapping from labels to compound D-terms.

    Leaves of a binding that are themselves labels of the mapping refer to
    that binding; all other leaves are primitive (axiom labels or ``n``).
    ``aliases`` name primitive D-terms directly (a proof that is an axiom),
    or give a second name to a bound label.
    """

    def __init__(self, bindings: Mapping[str, DTerm], aliases: Optional[Mapping[str, str]] = None):
        self.bindings: Dict[str, DTerm] = dict(bindings)
        self.aliases: Dict[str, str] = dict(aliases or {})
        for label, body in self.bindings.items():
            if body.is_constant:
                raise ValueError(f"binding {label} must be compound, got {body}")
        self._expanded: Dict[str, DTerm] = {}
        self._order = self._linearize()

    def __contains__(self, label: str) -> bool:
        return label in self.bindings or label in self.aliases

    def __getitem__(self, label: str) -> DTerm:
        if label in self.aliases:
            return prim(self.aliases[label])
        try:
            return self.bindings[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} is not defined") from None

    def __len__(self) -> int:
        return len(self.bindings) + len(self.aliases)

    def __repr__(self) -> str:
        inner = ", ".join(f"{l}↦{b}" for l, b in self.bindings.items())
        return f"CompactedDTerm({{{inner}}})"

    @property
    def labels(self) -> List[str]:
        return list(self.bindings) + list(self.aliases)

    def dependencies(self, label: str) -> List[str]:
        """Labels of the mapping used directly in the binding of ``label``."""
        if label in self.aliases:
            return []
        return [l for l in sorted(prims(self[label])) if l in self.bindings]

    def primitive_labels(self) -> Set[str]:
        """Leaf labels that are not bound (axioms and ``n``)."""
        found = {a for a in self.aliases.values() if a not in self.bindings}
        for body in self.bindings.values():
            found |= {l for l in prims(body) if l not in self.bindings}
        return found

    def _linearize(self) -> List[str]:
        order: List[str] = []
        state: Dict[str, int] = {}

        def visit(label: str) -> None:
            mark = state.get(label)
            if mark == 2:
                return
            if mark == 1:
                raise CyclicLabels(f"label {label!r} depends on itself")
            state[label] = 1
            for dep in self.dependencies(label):
                visit(dep)
            state[label] = 2
            order.append(label)
        for label in self.bindings:
            visit(label)
        return order

    def linearization(self) -> List[str]:
        """Labels with every label after the labels it depends on."""
        return list(self._order)

    @property
    def roots(self) -> List[str]:
        """Labels that no other binding refers to."""
        used: Set[str] = set()
        for body in self.bindings.values():
            used |= prims(body)
        return [l for l in self.labels if l not in used]

    @property
    def inner_nodes(self) -> int:
        return sum(t_size(body) for body in self.bindings.values())

    def expand(self, label: str) -> DTerm:
        """The D-term represented by ``label``.

        Raises:
            UnknownLabel: if the label is not in the domain
        """
        if label in self.aliases:
            target = self.aliases[label]
            return self.expand(target) if target in self.bindings else prim(target)
        if label not in self.bindings:
            raise UnknownLabel(f"label {label!r} is not defined")
        if not self._expanded:
            for l in self._order:
                self._expanded[l] = self._inline(self.bindings[l])
        return self._expanded[label]

    def _inline(self, body: DTerm) -> DTerm:
        memo: Dict[DTerm, DTerm] = {}

        def walk(x: DTerm) -> DTerm:
            if x.is_constant:
                return self._expanded.get(x.name, x)
            done = memo.get(x)
            if done is None:
                done = D(walk(x.args[0]), walk(x.args[1]))
                memo[x] = done
            return done
        return walk(body)

    def expanded_roots(self) -> Dict[str, DTerm]:
        return {root: self.expand(root) for root in self.roots}


def compact(roots: Sequence[Tuple[Optional[str], DTerm]], label_all: bool = False,
            first_label: Optional[int] = None) -> CompactedDTerm:
    """Minimal DAG of a sequence of (root label, D-term).

    Roots and every compound subterm with more than one incoming edge get a
    label (with ``label_all`` every compound subterm does). Fresh labels are
    numerals following the largest numeric label in use, handed out in
    post-order of first visit.
    """
    order: List[DTerm] = []
    seen: Set[DTerm] = set()

    def visit(d: DTerm) -> None:
        if d.is_constant or d in seen:
            return
        seen.add(d)
        visit(d.args[0])
        visit(d.args[1])
        order.append(d)

    for _, d in roots:
        visit(d)

    incoming: Counter = Counter()
    for node in order:
        for child in node.args:
            if child.is_compound:
                incoming[child] += 1

    taken: Set[str] = {label for label, _ in roots if label is not None}
    for _, d in roots:
        taken |= prims(d)
    numerals = [int(l) for l in taken if l.isdigit()]
    counter = first_label if first_label is not None else max(numerals, default=0) + 1

    def fresh() -> str:
        nonlocal counter
        while str(counter) in taken:
            counter += 1
        label = str(counter)
        taken.add(label)
        counter += 1
        return label

    names: Dict[DTerm, str] = {}
    aliases: Dict[str, str] = {}
    root_nodes: Dict[DTerm, Optional[str]] = {}
    # later root labels of a D-term already named by an earlier root
    second_names: List[Tuple[str, DTerm]] = []
    for label, d in roots:
        if d.is_constant:
            aliases[label if label is not None else fresh()] = d.name
        elif root_nodes.get(d) is None:
            root_nodes[d] = label
        elif label is not None and label != root_nodes[d]:
            second_names.append((label, d))
    for node in order:
        if node in root_nodes:
            names[node] = root_nodes[node] if root_nodes[node] is not None else fresh()
        elif label_all or incoming[node] > 1:
            names[node] = fresh()
    for label, d in second_names:
        aliases[label] = names[d]

    def body(d: DTerm, top: bool) -> DTerm:
        if d.is_constant:
            return d
        if not top and d in names:
            return prim(names[d])
        return D(body(d.args[0], False), body(d.args[1], False))

    bindings = {names[node]: body(node, True) for node in order if node in names}
    return CompactedDTerm(bindings, aliases)


@dataclass
class DagStats:
    inner_nodes: int
    incoming: Dict[str, int] = field(default_factory=dict)
    occurrences: Dict[str, int] = field(default_factory=dict)
    n_leaves: int = 0
    leaves: int = 0


def _leaf_counts(body: DTerm) -> Counter:
    memo: Dict[DTerm, Counter] = {}

    def walk(x: DTerm) -> Counter:
        if x.is_constant:
            return Counter({x.name: 1})
        done = memo.get(x)
        if done is None:
            done = walk(x.args[0]) + walk(x.args[1])
            memo[x] = done
        return done
    return walk(body)


def dag_stats(delta: CompactedDTerm) -> DagStats:
    """Inner nodes, incoming DAG edges (DI) and tree occurrences (DR) per label.

    ``n`` leaves are left out of both maps and counted in ``n_leaves``.
    """
    incoming: Counter = Counter({label: 0 for label in delta.labels})
    leaf_counts = {label: _leaf_counts(body) for label, body in delta.bindings.items()}
    for counts in leaf_counts.values():
        incoming.update(counts)

    occurrences: Counter = Counter({root: 1 for root in delta.roots})
    for alias, target in delta.aliases.items():
        occurrences[target] += occurrences[alias]
    for label in reversed(delta.linearization()):
        k = occurrences[label]
        for leaf, times in leaf_counts[label].items():
            occurrences[leaf] += k * times

    n_leaves = occurrences.pop(N_LABEL, 0)
    incoming.pop(N_LABEL, None)
    primitive = delta.primitive_labels()
    leaves = n_leaves + sum(v for l, v in occurrences.items() if l in primitive)
    return DagStats(delta.inner_nodes, dict(incoming), dict(occurrences), n_leaves, leaves)


# ---------------------------------------------------------------------------
# level-wise enumeration

class LevelEnumerator:
    """Enumerates D-terms level by level for one size measure.

    Levels are cached. With ``keep`` only accepted terms are stored and used
    to build later levels.
    """

    MEASURES = ("tsize", "height", "csize", "prime", "psp")

    def __init__(self, measure: str, axioms: Sequence[str] = ("1",),
                 keep: Optional[Callable[[DTerm], bool]] = None):
        if measure not in self.MEASURES:
            raise ValueError(f"unknown measure {measure!r}")
        self.measure = measure
        self.axioms = [prim(a) for a in axioms]
        self.keep = keep
        self._levels: List[List[DTerm]] = []
        self._lock = threading.Lock()

    def level(self, n: int) -> List[DTerm]:
        with self._lock:
            while len(self._levels) <= n:
                k = len(self._levels)
                built = self._build(k)
                if self.keep is not None:
                    built = [d for d in built if self.keep(d)]
                self._levels.append(built)
                logger.debug("%s level %d: %d terms", self.measure, k, len(built))
            return self._levels[n]

    def levels(self) -> Iterator[Tuple[int, List[DTerm]]]:
        n = 0
        while True:
            yield n, self.level(n)
            n += 1

    def _below(self, n: int) -> List[DTerm]:
        return [d for k in range(n) for d in self._levels[k]]

    def _build(self, n: int) -> List[DTerm]:
        if n == 0:
            return list(self.axioms)
        built: Dict[DTerm, None] = {}
        if self.measure == "tsize":
            for i in range(n):
                for a in self._levels[i]:
                    for b in self._levels[n - 1 - i]:
                        built[D(a, b)] = None
        elif self.measure == "height":
            top = self._levels[n - 1]
            lower = self._below(n - 1)
            everything = lower + top
            for a in top:
                for b in everything:
                    built[D(a, b)] = None
            for a in lower:
                for b in top:
                    built[D(a, b)] = None
        elif self.measure == "csize":
            for a, b in csize_pairs(self._below(n), n):
                built[D(a, b)] = None
        elif self.measure == "prime":
            axiom = self.axioms[0]
            if n == 1:
                built[D(axiom, axiom)] = None
            else:
                for d in self._levels[n - 1]:
                    built[D(axiom, d)] = None
                    built[D(d, axiom)] = None
        else:
            for d in self._levels[n - 1]:
                for candidate in psp_successors(d, self.axioms):
                    built[candidate] = None
        return list(built)


def csize_pairs(lower: List[DTerm], n: int) -> Iterator[Tuple[DTerm, DTerm]]:
    """Pairs (a, b) of lower-level terms with c-size(D(a, b)) = n."""
    for a in lower:
        sa = subeq(a)
        for b in lower:
            if len(sa | subeq(b)) == n - 1:
                yield a, b


def psp_parts(d: DTerm, axioms: Sequence[DTerm] = (), depth: Optional[int] = None) -> List[DTerm]:
    """Subterms paired with d by a PSP step: Subeq(d) in preorder, then its
    leaves, then the remaining axioms.

    With a depth, only subterms at most that many steps below d are taken,
    in preorder of first occurrence, followed by the axioms.
    """
    if depth is None:
        parts = subeq_preorder(d) + leaves_in_order(d)
    else:
        found: Dict[DTerm, None] = {}

        def walk(e: DTerm, k: int) -> None:
            found.setdefault(e, None)
            if e.is_compound and k < depth:
                walk(e.args[0], k + 1)
                walk(e.args[1], k + 1)
        walk(d, 0)
        parts = list(found)
    present = set(parts)
    parts += [a for a in axioms if a not in present]
    return parts


def psp_successors(d: DTerm, axioms: Sequence[DTerm] = (), depth: Optional[int] = None) -> List[DTerm]:
    """D(d, e) for each part e, and D(e, d) for each part e other than d."""
    result: Dict[DTerm, None] = {}
    for e in psp_parts(d, axioms, depth):
        result[D(d, e)] = None
        if e is not d:
            result[D(e, d)] = None
    return list(result)


@lru_cache(maxsize=None)
def _shared_enumerator(measure: str, axioms: Tuple[str, ...]) -> LevelEnumerator:
    return LevelEnumerator(measure, axioms)


def prime_level(n: int, axiom: str = "1") -> List[DTerm]:
    return _shared_enumerator("prime", (axiom,)).level(n)


def psp_level(n: int, axioms: Sequence[str] = ("1",)) -> List[DTerm]:
    return _shared_enumerator("psp", tuple(axioms)).level(n)


def in_psp(d: DTerm, axioms: Sequence[str] = ("1",)) -> bool:
    """Whether d belongs to some PSP level."""
    axiom_set = set(axioms)
    memo: Dict[DTerm, bool] = {}

    def member(x: DTerm) -> bool:
        if x.is_constant:
            return x.name in axiom_set
        done = memo.get(x)
        if done is None:
            a, b = x.args
            done = ((member(a) and (contains(a, b) or (b.is_constant and b.name in axiom_set)))
                    or (member(b) and (strictly_contains(b, a) or (a.is_constant and a.name in axiom_set))))
            memo[x] = done
        return done
    return member(d)


def count_dterms(measure: str, n: int) -> int:
    """Number of distinct single-axiom D-terms of size n under a measure.

    Raises:
        ResourceLimit: when n exceeds the configured limit for the measure
    """
    limit = COUNT_LIMITS.get(measure)
    if limit is None:
        raise ValueError(f"unknown measure {measure!r}")
    if n > limit:
        raise ResourceLimit(f"count of {measure} level {n} exceeds the configured limit {limit}")
    if measure == "tsize":
        counts = [1]
        for k in range(1, n + 1):
            counts.append(sum(counts[i] * counts[k - 1 - i] for i in range(k)))
        return counts[n]
    if measure == "height":
        at_most = [1]
        for _ in range(n):
            at_most.append(1 + at_most[-1] ** 2)
        return at_most[n] - (at_most[n - 1] if n else 0)
    if n == 0:
        return 1
    enumerator = _shared_enumerator(measure, ("1",))
    if measure == "prime":
        return len(enumerator.level(n))
    for k in range(n - 1):
        enumerator.level(k)
    if measure == "csize":
        lower = [d for k in range(n) for d in enumerator.level(k)]
        return sum(1 for _ in csize_pairs(lower, n))
    distinct: Set[Tuple[int, int]] = set()
    for d in enumerator.level(n - 1):
        for e in psp_parts(d, enumerator.axioms):
            distinct.add((id(d), id(e)))
            if e is not d:
                distinct.add((id(e), id(d)))
    return len(distinct)
