"""
First-order terms with maximal sharing, substitutions, most general
unification, subsumption and variant tests.

Terms are hash-consed: constructing a term that already exists returns the
existing object, so structural equality is object identity and shared
subterms are shared objects. Formula terms use the binary functor ``i``;
proof terms (see ``core.dterms``) reuse the same machinery with functor ``D``.
"""
import logging
import threading
from typing import (
    Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional,
    Sequence, Set, Tuple, Union,
)
from weakref import WeakValueDictionary

from config.settings import IMPLICATION, OVERFLOW_VARIABLE_PREFIX, VARIABLE_NAMES
from core.errors import NotUnifiable, PositionOutOfRange

logger = logging.getLogger(__name__)

Position = Tuple[int, ...]
EPSILON: Position = ()


class PosVar(NamedTuple):
    """Name of a positional variable: y_p (kind 'y') or x_p^i (kind 'x')."""

    kind: str
    position: Position
    index: int = 0

    def __str__(self) -> str:
        where = format_position(self.position)
        if self.kind == "y":
            return f"y_{where}"
        return f"x{self.index}_{where}"


_table: "WeakValueDictionary[tuple, Term]" = WeakValueDictionary()
_lock = threading.Lock()


def _intern(key: tuple, factory: Callable[[], "Term"]) -> "Term":
    with _lock:
        term = _table.get(key)
        if term is None:
            term = factory()
            _table[key] = term
        return term


class Term:
    """Base class of hash-consed terms. Equality is identity."""

    __slots__ = ("__weakref__",)

    is_variable = False
    is_constant = False
    is_compound = False
    ground = True
    size = 0
    height = 0


class Variable(Term):
    """A variable; ``name`` is a string or a ``PosVar``."""

    __slots__ = ("name",)
    is_variable = True
    ground = False

    def __new__(cls, name: Union[str, PosVar]) -> "Variable":
        def make():
            term = object.__new__(cls)
            term.name = name
            return term
        return _intern(("v", name), make)

    def __repr__(self) -> str:
        return str(self.name)


class Constant(Term):
    """A constant (Skolem symbol, or a primitive label of a proof term)."""

    __slots__ = ("name",)
    is_constant = True

    def __new__(cls, name: str) -> "Constant":
        def make():
            term = object.__new__(cls)
            term.name = name
            return term
        return _intern(("c", name), make)

    def __repr__(self) -> str:
        return self.name


class Compound(Term):
    """Application of a functor to a tuple of argument terms."""

    __slots__ = ("functor", "args", "size", "height", "ground", "_cache")
    is_compound = True

    def __new__(cls, functor: str, args: Sequence[Term]) -> "Compound":
        args = tuple(args)

        def make():
            term = object.__new__(cls)
            term.functor = functor
            term.args = args
            term.size = 1 + sum(a.size for a in args)
            term.height = 1 + max((a.height for a in args), default=0)
            term.ground = all(a.ground for a in args)
            term._cache = {}
            return term
        return _intern(("f", functor, args), make)

    def __repr__(self) -> str:
        return f"{self.functor}({','.join(repr(a) for a in self.args)})"


def imp(antecedent: Term, consequent: Term) -> Compound:
    """Build i(antecedent, consequent)."""
    return Compound(IMPLICATION, (antecedent, consequent))


def display_name(index: int) -> str:
    """Display name of the index-th canonical variable (p..w, then v1, v2, ...)."""
    if index < len(VARIABLE_NAMES):
        return VARIABLE_NAMES[index]
    return f"{OVERFLOW_VARIABLE_PREFIX}{index - len(VARIABLE_NAMES) + 1}"


def format_position(position: Position) -> str:
    return ".".join(str(i) for i in position) if position else "ε"


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("", "ε", "e"):
        return EPSILON
    return tuple(int(part) for part in text.split("."))


def term_order_key(term: Term) -> tuple:
    """Total order on terms, used to normalize unordered pairs."""
    if term.is_variable:
        return (0, str(term.name))
    if term.is_constant:
        return (1, term.name)
    return (2, term.functor, tuple(term_order_key(a) for a in term.args))


def make_pair(s: Term, t: Term) -> Tuple[Term, Term]:
    """Unordered pair {s, t}: the smaller term comes first."""
    return (s, t) if term_order_key(s) <= term_order_key(t) else (t, s)


def pair_set(pairs: Iterable[Tuple[Term, Term]]) -> frozenset:
    """A TermPairSet: a frozenset of normalized unordered pairs."""
    return frozenset(make_pair(s, t) for s, t in pairs)


# ---------------------------------------------------------------------------
# traversal

def variables(term: Term) -> List[Variable]:
    """Variables of a term in left-to-right first-occurrence order."""
    found: Dict[Variable, None] = {}
    seen: Set[int] = set()

    def walk(t: Term) -> None:
        if t.is_variable:
            found.setdefault(t, None)
        elif t.is_compound and not t.ground and id(t) not in seen:
            seen.add(id(t))
            for arg in t.args:
                walk(arg)
    walk(term)
    return list(found)


def compound_subterms(term: Term) -> List[Compound]:
    """Distinct compound subterms, the term itself included, in preorder."""
    found: Dict[Compound, None] = {}

    def walk(t: Term) -> None:
        if t.is_compound and t not in found:
            found[t] = None
            for arg in t.args:
                walk(arg)
    walk(term)
    return list(found)


def compacted_size(term: Term) -> int:
    """Number of distinct compound subterms."""
    return len(compound_subterms(term))


def occurs_in(variable: Variable, term: Term) -> bool:
    if term is variable:
        return True
    if not term.is_compound or term.ground:
        return False
    return variable in variables(term)


def substitute(term: Term, mapping: Mapping[Variable, Term], memo: Optional[dict] = None) -> Term:
    """Simultaneously replace the variables in ``mapping``."""
    if memo is None:
        memo = {}

    def walk(t: Term) -> Term:
        if t.is_variable:
            return mapping.get(t, t)
        if not t.is_compound or t.ground:
            return t
        done = memo.get(t)
        if done is None:
            done = Compound(t.functor, [walk(a) for a in t.args])
            memo[t] = done
        return done
    return walk(term)


def canonical(term: Term) -> Term:
    """Rename variables to p, q, r, ... in first-occurrence order."""
    mapping = {v: Variable(display_name(i)) for i, v in enumerate(variables(term))}
    return substitute(term, mapping)


# ---------------------------------------------------------------------------
# positions

def positions(term: Term) -> List[Position]:
    """All positions of the term (as a tree), in preorder."""
    result: List[Position] = []

    def walk(t: Term, here: Position) -> None:
        result.append(here)
        if t.is_compound:
            for i, arg in enumerate(t.args, start=1):
                walk(arg, here + (i,))
    walk(term, EPSILON)
    return result


def subterm_at(term: Term, position: Position) -> Term:
    current = term
    for i in position:
        if not current.is_compound or not 1 <= i <= len(current.args):
            raise PositionOutOfRange(format_position(position), term)
        current = current.args[i - 1]
    return current


def replace_at(term: Term, position: Position, replacement: Term) -> Term:
    if not position:
        return replacement
    head, rest = position[0], position[1:]
    if not term.is_compound or not 1 <= head <= len(term.args):
        raise PositionOutOfRange(format_position(position), term)
    args = list(term.args)
    args[head - 1] = replace_at(args[head - 1], rest, replacement)
    return Compound(term.functor, args)


# ---------------------------------------------------------------------------
# substitutions

class Substitution(Mapping[Variable, Term]):
    """Finite mapping from variables to terms; identity bindings are dropped."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Optional[Mapping[Variable, Term]] = None):
        self._bindings = {v: t for v, t in (bindings or {}).items() if v is not t}

    @classmethod
    def empty(cls) -> "Substitution":
        return cls()

    @classmethod
    def singleton(cls, variable: Variable, term: Term) -> "Substitution":
        return cls({variable: term})

    def __getitem__(self, variable: Variable) -> Term:
        return self._bindings[variable]

    def __iter__(self) -> Iterator[Variable]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}↦{t}" for v, t in self._bindings.items())
        return f"{{{inner}}}"

    @property
    def domain(self) -> Set[Variable]:
        return set(self._bindings)

    @property
    def variable_range(self) -> Set[Variable]:
        found: Set[Variable] = set()
        for t in self._bindings.values():
            found.update(variables(t))
        return found

    def is_idempotent(self) -> bool:
        return not (self.domain & self.variable_range)

    def apply(self, term: Term) -> Term:
        return substitute(term, self._bindings)

    def compose(self, other: "Substitution") -> "Substitution":
        """The substitution that applies ``self`` first, then ``other``."""
        memo: dict = {}
        bindings = {v: substitute(t, other._bindings, memo) for v, t in self._bindings.items()}
        for v, t in other._bindings.items():
            bindings.setdefault(v, t)
        return Substitution(bindings)


def apply(term: Term, sigma: Substitution) -> Term:
    return sigma.apply(term)


def compose(sigma: Substitution, theta: Substitution) -> Substitution:
    return sigma.compose(theta)


class Unifier:
    """Incremental most general unifier kept in triangular form.

    Bindings may point to terms that contain bound variables; ``resolve``
    applies them fully, memoized per shared subterm.
    """

    def __init__(self):
        self.bindings: Dict[Variable, Term] = {}
        self._resolved: Dict[Term, Term] = {}

    def deref(self, term: Term) -> Term:
        while term.is_variable:
            bound = self.bindings.get(term)
            if bound is None:
                return term
            term = bound
        return term

    def occurs(self, variable: Variable, term: Term) -> bool:
        stack = [term]
        seen: Set[int] = set()
        while stack:
            t = self.deref(stack.pop())
            if t is variable:
                return True
            if t.is_compound and not t.ground and id(t) not in seen:
                seen.add(id(t))
                stack.extend(t.args)
        return False

    def unify(self, s: Term, t: Term) -> None:
        """Extend the bindings to unify s and t; raises NotUnifiable."""
        stack = [(s, t)]
        while stack:
            a, b = stack.pop()
            a, b = self.deref(a), self.deref(b)
            if a is b:
                continue
            if a.is_variable:
                self._bind(a, b)
            elif b.is_variable:
                self._bind(b, a)
            elif (a.is_compound and b.is_compound and a.functor == b.functor
                    and len(a.args) == len(b.args)):
                stack.extend(zip(a.args, b.args))
            else:
                raise NotUnifiable(f"clash between {a} and {b}")

    def _bind(self, variable: Variable, term: Term) -> None:
        if self.occurs(variable, term):
            raise NotUnifiable(f"{variable} occurs in {term}")
        self.bindings[variable] = term
        self._resolved.clear()

    def resolve(self, term: Term) -> Term:
        """Apply the bindings exhaustively."""
        memo = self._resolved

        def walk(t: Term) -> Term:
            t = self.deref(t)
            if not t.is_compound or t.ground:
                return t
            done = memo.get(t)
            if done is None:
                done = Compound(t.functor, [walk(a) for a in t.args])
                memo[t] = done
            return done
        return walk(term)

    def substitution(self) -> Substitution:
        return Substitution({v: self.resolve(v) for v in self.bindings})


def unify(pairs: Iterable[Tuple[Term, Term]]) -> Substitution:
    """Clean most general unifier of a set of term pairs.

    Raises:
        NotUnifiable: on a symbol clash or an occurs-check failure
    """
    unifier = Unifier()
    for s, t in pairs:
        unifier.unify(s, t)
    return unifier.substitution()


# ---------------------------------------------------------------------------
# subsumption

def match(pattern: Term, target: Term) -> Optional[Dict[Variable, Term]]:
    """Matcher θ with pattern·θ = target, or None. Target variables are rigid."""
    bindings: Dict[Variable, Term] = {}
    seen: Set[Tuple[int, int]] = set()
    stack = [(pattern, target)]
    while stack:
        s, t = stack.pop()
        if s.is_variable:
            bound = bindings.get(s)
            if bound is None:
                bindings[s] = t
            elif bound is not t:
                return None
            continue
        if s.ground:
            if s is not t:
                return None
            continue
        if not t.is_compound or s.functor != t.functor or len(s.args) != len(t.args):
            return None
        key = (id(s), id(t))
        if key not in seen:
            seen.add(key)
            stack.extend(zip(s.args, t.args))
    return bindings


def subsumes(s: Term, t: Term) -> bool:
    """True iff t is an instance of s."""
    return match(s, t) is not None


def variant(s: Term, t: Term) -> bool:
    """True iff s and t are equal up to renaming of variables."""
    return canonical(s) is canonical(t)
