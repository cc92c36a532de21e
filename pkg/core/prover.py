"""
Axiom-driven proof search by structure enumeration.

D-terms are generated level by level under an enumeration policy; each new
D-term's MGT is computed by unification, checked against formula-size
thresholds and against the MGTs produced before, and tested for subsuming
the goal. Retained D-terms form the next level, in discovery order, or
sorted by formula size and cut to the cache capacity when one is set.

Under the PSP policy a lemma is combined with its subterms down to the
partner depth and with the axioms; without a depth every subterm is a
partner.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set

from config.settings import (
    DEFAULT_CACHE_CAP, DEFAULT_JOBS, DEFAULT_MAX_FH, DEFAULT_MAX_FT, DEFAULT_MAX_FV, DEFAULT_MAX_LEVEL,
    DEFAULT_POLICY, DEFAULT_PSP_DEPTH, TIME_LIMIT,
)
from core.dterms import CompactedDTerm, D, DTerm, SizeReport, compact, csize_pairs, prim, psp_successors
from core.errors import Exhausted, ProofCheckFailed
from core.semantics import Atom, AxiomAssignment, Problem, check_proof, detach
from core.terms import Term, canonical, subsumes, variables
from utils.helpers import Budget, chunked

logger = logging.getLogger(__name__)

POLICIES = ("psp", "prime", "tsize", "height", "csize")
DEDUP_MODES = ("variant", "subsumption")


@dataclass(frozen=True)
class EnumPolicy:
    kind: str = DEFAULT_POLICY
    max_level: int = DEFAULT_MAX_LEVEL
    max_ft: Optional[int] = DEFAULT_MAX_FT
    max_fh: Optional[int] = DEFAULT_MAX_FH
    max_fv: Optional[int] = DEFAULT_MAX_FV
    dedup: str = "variant"
    psp_depth: Optional[int] = DEFAULT_PSP_DEPTH
    cache_cap: Optional[int] = DEFAULT_CACHE_CAP
    time_limit: Optional[float] = TIME_LIMIT
    jobs: int = DEFAULT_JOBS

    def __post_init__(self):
        if self.kind not in POLICIES:
            raise ValueError(f"unknown enumeration policy {self.kind!r}")
        if self.dedup not in DEDUP_MODES:
            raise ValueError(f"unknown dedup mode {self.dedup!r}")
        if self.max_level < 0:
            raise ValueError("max_level must not be negative")
        if self.psp_depth is not None and self.psp_depth < 0:
            raise ValueError("psp_depth must not be negative")
        for name in ("max_ft", "max_fh", "max_fv", "cache_cap"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive")

    def admits(self, argument: Term) -> bool:
        """Whether an MGT argument is within the formula-size thresholds."""
        if self.max_ft is not None and argument.size > self.max_ft:
            return False
        if self.max_fh is not None and argument.height > self.max_fh:
            return False
        if self.max_fv is not None and len(variables(argument)) > self.max_fv:
            return False
        return True


@dataclass(frozen=True)
class LemmaEntry:
    dterm: DTerm
    mgt_arg: Term
    level: int


@dataclass
class LevelStats:
    level: int
    generated: int = 0
    undefined: int = 0
    over_threshold: int = 0
    duplicate: int = 0
    kept: int = 0
    retained: int = 0

    def __str__(self) -> str:
        return (f"level {self.level}: generated {self.generated}, undefined {self.undefined}, "
                f"over threshold {self.over_threshold}, duplicate {self.duplicate}, "
                f"kept {self.kept}, retained {self.retained}")


@dataclass
class ProofResult:
    delta: CompactedDTerm
    dterm: DTerm
    sizes: SizeReport
    goal: Atom
    level: int
    stats: List[LevelStats] = field(default_factory=list)


class LemmaSearch:
    """Level-wise generation of lemmas under a policy, with an optional goal."""

    def __init__(self, alpha: AxiomAssignment, policy: EnumPolicy, goal: Optional[Atom] = None):
        self.alpha = alpha
        self.policy = policy
        self.goal = goal
        self.axioms = [prim(label) for label in alpha.labels]
        self.levels: List[List[DTerm]] = []
        self.stats: List[LevelStats] = []
        self.found: Optional[LemmaEntry] = None
        self._seen: Set[Term] = set()
        self._kept: List[Term] = []
        # MGT arguments of the axioms and of every retained lemma
        self._known: Dict[DTerm, Term] = {}
        self._budget = Budget(policy.time_limit)

    def _is_new(self, argument: Term) -> bool:
        key = canonical(argument)
        if key in self._seen:
            return False
        if self.policy.dedup == "subsumption" and any(subsumes(k, argument) for k in self._kept):
            return False
        self._remember(key)
        return True

    def _remember(self, key: Term) -> None:
        self._seen.add(key)
        if self.policy.dedup == "subsumption":
            self._kept.append(key)

    def _proves_goal(self, argument: Term) -> bool:
        return self.goal is not None and subsumes(argument, self.goal.argument)

    def _candidates(self, n: int) -> List[DTerm]:
        kind = self.policy.kind
        levels = self.levels
        generated: Dict[DTerm, None] = {}
        if kind == "psp":
            for d in levels[n - 1]:
                for c in psp_successors(d, self.axioms, self.policy.psp_depth):
                    generated[c] = None
        elif kind == "prime":
            if n == 1:
                for a in self.axioms:
                    for b in self.axioms:
                        generated[D(a, b)] = None
            else:
                for d in levels[n - 1]:
                    for a in self.axioms:
                        generated[D(a, d)] = None
                        generated[D(d, a)] = None
        elif kind == "tsize":
            for i in range(n):
                for a in levels[i]:
                    for b in levels[n - 1 - i]:
                        generated[D(a, b)] = None
        elif kind == "height":
            top = levels[n - 1]
            lower = [d for level in levels[:n - 1] for d in level]
            everything = lower + top
            for a in top:
                for b in everything:
                    generated[D(a, b)] = None
            for a in lower:
                for b in top:
                    generated[D(a, b)] = None
        else:
            lower = [d for level in levels for d in level]
            for a, b in csize_pairs(lower, n):
                generated[D(a, b)] = None
        return list(generated)

    def _argument(self, d: DTerm) -> Optional[Term]:
        known = self._known
        if d in known:
            return known[d]
        if d.is_constant or d.args[0] not in known or d.args[1] not in known:
            return self.alpha.mgt_argument(d)
        return detach(known[d.args[0]], known[d.args[1]])

    def _arguments(self, candidates: List[DTerm]) -> List[Optional[Term]]:
        jobs = self.policy.jobs
        if jobs <= 1 or len(candidates) < 2 * jobs:
            return [self._argument(c) for c in candidates]
        batches = chunked(candidates, (len(candidates) + jobs - 1) // jobs)
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(lambda b: [self._argument(c) for c in b], batch) for batch in batches]
            arguments: List[Optional[Term]] = []
            for f in futures:
                arguments.extend(f.result())
        return arguments

    def run(self) -> Iterator[LemmaEntry]:
        """Yield retained lemmas level by level; stops early when the goal is proven."""
        stats = LevelStats(0, generated=len(self.axioms))
        level0 = []
        for a in self.axioms:
            argument = self.alpha.mgt_argument(a)
            self._remember(canonical(argument))
            self._known[a] = argument
            entry = LemmaEntry(a, argument, 0)
            if self._proves_goal(argument):
                self.found = entry
                self.stats.append(stats)
                return
            level0.append(a)
            yield entry
        stats.kept = stats.retained = len(level0)
        self.levels.append(level0)
        self.stats.append(stats)

        for n in range(1, self.policy.max_level + 1):
            candidates = self._candidates(n)
            stats = LevelStats(n, generated=len(candidates))
            self.stats.append(stats)
            kept: List[LemmaEntry] = []
            arguments = self._arguments(candidates)
            self._budget.charge(len(candidates))
            for c, argument in zip(candidates, arguments):
                if argument is None:
                    stats.undefined += 1
                    continue
                if not self.policy.admits(argument):
                    stats.over_threshold += 1
                    continue
                if not self._is_new(argument):
                    stats.duplicate += 1
                    continue
                entry = LemmaEntry(c, argument, n)
                if self._proves_goal(argument):
                    self.found = entry
                    stats.kept = len(kept) + 1
                    logger.info("%s", stats)
                    return
                kept.append(entry)
                yield entry
            stats.kept = len(kept)
            if self.policy.cache_cap is not None:
                kept.sort(key=lambda e: (e.mgt_arg.size, e.mgt_arg.height))
                kept = kept[:self.policy.cache_cap]
            for entry in kept:
                self._known[entry.dterm] = entry.mgt_arg
            stats.retained = len(kept)
            self.levels.append([entry.dterm for entry in kept])
            logger.info("%s", stats)
            if not kept:
                break


def enumerate_lemmas(alpha: AxiomAssignment, policy: EnumPolicy) -> Iterator[LemmaEntry]:
    """Goal-free enumeration of (D-term, MGT) pairs level by level.

    Raises:
        ResourceLimit: when the time limit of the policy is exceeded
    """
    yield from LemmaSearch(alpha, policy).run()


def extract_compacted(d: DTerm, label: str = "goal") -> CompactedDTerm:
    """The proof as a compacted D-term with its root named label."""
    return compact([(label, d)])


def prove(problem: Problem, policy: Optional[EnumPolicy] = None) -> ProofResult:
    """Search a proof of the problem's goal.

    Raises:
        ValueError: if the problem has no goal
        Exhausted: if every level up to max_level was enumerated without proof
        ProofCheckFailed: if the extracted proof does not check against the problem
        ResourceLimit: when the time limit of the policy is exceeded
    """
    if problem.goal is None:
        raise ValueError("prove needs a problem with a goal")
    policy = policy or EnumPolicy()
    search = LemmaSearch(problem.axioms, policy, problem.goal)
    for _ in search.run():
        pass
    if search.found is None:
        raise Exhausted(f"no proof of {problem.goal} within {policy.max_level} {policy.kind} levels", search.stats)
    d = search.found.dterm
    label = problem.name or "goal"
    delta = extract_compacted(d, label)
    verdict = check_proof(delta, problem)[label]
    if not verdict.proven:
        raise ProofCheckFailed(f"proof of {label} found at level {search.found.level} does not check")
    logger.info("proof found at level %d and checked: %s", search.found.level, verdict.sizes)
    return ProofResult(delta, d, verdict.sizes, problem.goal, search.found.level, search.stats)


def level_summary(stats: Sequence[LevelStats]) -> str:
    return "\n".join(str(s) for s in stats)
