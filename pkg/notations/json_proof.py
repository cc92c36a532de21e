"""
JSON export and import of proof corpora.

    {
      "axioms": {"1": "CCCpqrCCrpCsp"},
      "steps": [{"label": "2", "d": [["1", "1"], "n"], "mgt": "i(...)", "polish": "C..."}],
      "roots": ["2"],
      "goals": []
    }

``d`` is the step's D-term as nested two-element arrays with labels at the
leaves. ``mgt`` and ``polish`` are written on export; on import ``polish``
is taken as the stated formula of the step.
"""
import json
from typing import Any, Dict, List, Union

from config.settings import N_LABEL
from core.dterms import CompactedDTerm, D, DTerm, prim
from core.errors import Malformed, UndefinedLabel
from core.semantics import AxiomAssignment
from core.terms import canonical
from notations.base_notation import BaseNotation
from notations.corpus_file import Corpus
from notations.polish_notation import PolishNotation

NestedD = Union[str, List[Any]]


def to_nested(d: DTerm) -> NestedD:
    if d.is_constant:
        return d.name
    return [to_nested(d.args[0]), to_nested(d.args[1])]


def from_nested(value: NestedD) -> DTerm:
    if isinstance(value, (str, int)):
        return prim(str(value))
    if isinstance(value, list) and len(value) == 2:
        return D(from_nested(value[0]), from_nested(value[1]))
    raise Malformed(f"not a D-term: {value!r}")


class JsonProofNotation(BaseNotation):
    """Reader and writer for the JSON proof schema."""

    # Keys
    AXIOMS = "axioms"
    STEPS = "steps"
    ROOTS = "roots"
    GOALS = "goals"

    def __init__(self):
        super().__init__()
        self.polish = PolishNotation()

    def format(self, corpus: Corpus) -> str:
        theorems = corpus.theorems()
        steps = []
        for label in corpus.delta.linearization() + list(corpus.delta.aliases):
            step: Dict[str, Any] = {"label": label, "d": to_nested(corpus.delta[label])}
            theorem = theorems.get(label)
            if theorem is not None:
                step["mgt"] = repr(canonical(theorem))
                step["polish"] = self.polish.format(theorem)
            steps.append(step)
        document = {
            self.AXIOMS: {l: self.polish.format(t) for l, t in corpus.alpha.terms.items()},
            self.STEPS: steps,
            self.ROOTS: corpus.delta.roots,
            self.GOALS: list(corpus.goals),
        }
        return json.dumps(document, ensure_ascii=False, indent=2) + "\n"

    def parse(self, text: str) -> Corpus:
        """
        Read a corpus from JSON.

        Raises:
            Malformed: If the document does not follow the schema
        """
        try:
            document = json.loads(text)
            axioms = {str(l): self.polish.parse(f) for l, f in document[self.AXIOMS].items()}
            bindings: Dict[str, DTerm] = {}
            aliases: Dict[str, str] = {}
            formulas = {}
            for step in document[self.STEPS]:
                label = str(step["label"])
                d = from_nested(step["d"])
                if d.is_constant:
                    aliases[label] = d.name
                else:
                    bindings[label] = d
                if step.get("polish"):
                    formulas[label] = self.polish.parse(step["polish"])
            goals = [str(g) for g in document.get(self.GOALS, [])]
        except json.JSONDecodeError as error:
            raise Malformed(f"invalid JSON: {error.msg}", error.lineno) from None
        except (KeyError, TypeError, AttributeError) as error:
            raise Malformed(f"document does not follow the proof schema: {error}") from None
        delta = CompactedDTerm(bindings, aliases)
        unknown = delta.primitive_labels() - set(axioms) - {N_LABEL}
        if unknown:
            raise UndefinedLabel(f"labels without definition: {', '.join(sorted(unknown))}")
        return Corpus(delta, AxiomAssignment(axioms), goals, formulas)


def export_json(corpus: Corpus) -> str:
    return JsonProofNotation().format(corpus)


def import_json(text: str) -> Corpus:
    return JsonProofNotation().parse(text)
