"""JSON files for subtyping derivations, typing derivations and Gödel configurations.

A derivation file is one JSON object:

.. code-block:: json

    {"format": "ttrkit/1", "kind": "typing", "name": "...", "system": "TTR",
     "signature": {"fn": {"0": 0, "s": 1}, "pred": {}},
     "equations": ["p(s(x)) = x"],
     "derivation": {...}}

Formulas, first-order terms and λ-terms are stored as text in the syntax
of their parsers, so files stay readable.  :func:`dumps` is a fixed point
of ``dumps ∘ loads``: loading a file and writing it back reproduces it
byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import lambda_core as lc
from .encodings import parse_term_ext
from .formulas import (
    EquationSystem,
    FormulaError,
    GodelConfig,
    GodelEntry,
    Signature,
    parse_equations,
    parse_fo_term,
    parse_formula,
    print_equations,
    print_formula,
    print_term,
)
from .subtyping import EqInst, FormulaInst, SubDerivation, TermInst
from .typing_rules import Judgment, System, TypingDerivation

FORMAT = "ttrkit/1"


class DerivationFileError(ValueError):
    """A file that does not follow the derivation format."""


@dataclass
class DerivationFile:
    kind: str  # "typing" or "subtyping"
    derivation: TypingDerivation | SubDerivation
    name: str = ""
    system: System | None = None
    signature: Signature = field(default_factory=Signature)
    equations: EquationSystem = field(default_factory=EquationSystem)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _enc_inst(inst: Any) -> Any:
    match inst:
        case None:
            return None
        case str():
            return {"var": inst}
        case TermInst(t):
            return {"term": print_term(t)}
        case FormulaInst(params, g):
            return {"params": list(params), "formula": print_formula(g)}
        case EqInst(context, hole, source, target):
            return {
                "context": print_formula(context),
                "hole": hole,
                "source": print_term(source),
                "target": print_term(target),
            }
        case SubDerivation():
            return {"sub": encode_sub(inst)}
    raise TypeError(f"cannot encode instantiation {inst!r}")


def encode_sub(d: SubDerivation) -> dict:
    out: dict[str, Any] = {"rule": d.rule, "left": print_formula(d.left), "right": print_formula(d.right)}
    if d.inst is not None:
        out["inst"] = _enc_inst(d.inst)
    if d.premises:
        out["premises"] = [encode_sub(p) for p in d.premises]
    return out


def encode_typing(d: TypingDerivation) -> dict:
    out: dict[str, Any] = {
        "rule": d.rule,
        "context": [[x, print_formula(a)] for x, a in d.context],
        "subject": lc.print_term(d.subject),
        "type": print_formula(d.type),
    }
    if d.inst is not None:
        out["inst"] = _enc_inst(d.inst)
    if d.premises:
        out["premises"] = [encode_typing(p) for p in d.premises]
    return out


def to_json(f: DerivationFile) -> dict:
    body = encode_typing(f.derivation) if f.kind == "typing" else encode_sub(f.derivation)
    out: dict[str, Any] = {"format": FORMAT, "kind": f.kind, "name": f.name}
    if f.system is not None:
        out["system"] = f.system.value
    out["signature"] = {
        "fn": dict(sorted(f.signature.functions.items())),
        "pred": dict(sorted(f.signature.predicates.items())),
    }
    out["equations"] = print_equations(f.equations)
    out["derivation"] = body
    return out


def dumps(f: DerivationFile) -> str:
    return json.dumps(to_json(f), indent=1, ensure_ascii=False) + "\n"


def dump(f: DerivationFile, path: str | Path) -> None:
    Path(path).write_text(dumps(f), encoding="utf-8")


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


class _Decoder:
    def __init__(self, sig: Signature):
        self.sig = sig

    def formula(self, text: str):
        return parse_formula(text, self.sig)

    def term(self, text: str):
        return parse_fo_term(text, self.sig)

    def inst(self, data: Any) -> Any:
        if data is None:
            return None
        if not isinstance(data, dict):
            raise DerivationFileError(f"bad instantiation {data!r}")
        if "var" in data:
            return str(data["var"])
        if "term" in data:
            return TermInst(self.term(data["term"]))
        if "params" in data:
            return FormulaInst(tuple(data["params"]), self.formula(data["formula"]))
        if "hole" in data:
            return EqInst(self.formula(data["context"]), data["hole"], self.term(data["source"]), self.term(data["target"]))
        if "sub" in data:
            return self.sub(data["sub"])
        raise DerivationFileError(f"bad instantiation {data!r}")

    def sub(self, data: dict) -> SubDerivation:
        try:
            return SubDerivation(
                data["rule"],
                self.formula(data["left"]),
                self.formula(data["right"]),
                tuple(self.sub(p) for p in data.get("premises", [])),
                self.inst(data.get("inst")),
            )
        except KeyError as exc:
            raise DerivationFileError(f"missing field {exc} in a subtyping node") from None

    def typing(self, data: dict) -> TypingDerivation:
        try:
            ctx = tuple((x, self.formula(a)) for x, a in data["context"])
            j = Judgment(ctx, parse_term_ext(data["subject"]), self.formula(data["type"]))
            return TypingDerivation(
                data["rule"],
                j,
                tuple(self.typing(p) for p in data.get("premises", [])),
                self.inst(data.get("inst")),
            )
        except KeyError as exc:
            raise DerivationFileError(f"missing field {exc} in a typing node") from None


def from_json(data: dict) -> DerivationFile:
    if data.get("format") != FORMAT:
        raise DerivationFileError(f"unsupported format {data.get('format')!r}; expected {FORMAT!r}")
    kind = data.get("kind")
    if kind not in ("typing", "subtyping"):
        raise DerivationFileError(f"kind must be 'typing' or 'subtyping', not {kind!r}")
    sig_data = data.get("signature", {})
    sig = Signature(dict(sig_data.get("fn", {})), dict(sig_data.get("pred", {})))
    try:
        eqs = parse_equations("\n".join(data.get("equations", [])), sig)
        dec = _Decoder(sig)
        body = dec.typing(data["derivation"]) if kind == "typing" else dec.sub(data["derivation"])
    except (FormulaError, lc.TermSyntaxError) as exc:
        raise DerivationFileError(str(exc)) from exc
    system = System.parse(data["system"]) if data.get("system") else None
    return DerivationFile(kind, body, data.get("name", ""), system, sig, eqs)


def loads(text: str) -> DerivationFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DerivationFileError(f"invalid JSON: {exc}") from None
    return from_json(data)


def load(path: str | Path) -> DerivationFile:
    return loads(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Gödel configurations
# ---------------------------------------------------------------------------


def config_to_json(cfg: GodelConfig) -> dict:
    return {
        x: {"family": list(e.family), "params": list(e.params), "formula": print_formula(e.formula)}
        for x, e in sorted(cfg.entries.items())
    }


def config_from_json(data: dict, signature: Signature | None = None) -> GodelConfig:
    """Read a configuration.

    Either map each variable to ``{"family", "params", "formula"}``, or
    use the shorthand ``{"negation": {"X": 1, ...}}`` for ``F_X = ¬X``.
    """
    if set(data) == {"negation"}:
        return GodelConfig.negation({k: int(v) for k, v in data["negation"].items()})
    entries = {}
    for x, e in data.items():
        try:
            entries[x] = GodelEntry(
                tuple(e["family"]), tuple(e["params"]), parse_formula(e["formula"], signature)
            )
        except (KeyError, TypeError):
            raise DerivationFileError(f"bad configuration entry for {x}") from None
    return GodelConfig(entries)


def load_config(path: str | Path, signature: Signature | None = None) -> GodelConfig:
    return config_from_json(json.loads(Path(path).read_text(encoding="utf-8")), signature)


# ---------------------------------------------------------------------------
# The packaged corpus
# ---------------------------------------------------------------------------


DATA_DIR = Path(__file__).parent / "data"


def fixture_file(name: str) -> DerivationFile:
    """The corpus fixture ``name`` as a :class:`DerivationFile`."""
    from .fixtures import corpus

    fx = corpus()[name]
    return DerivationFile("typing", fx.derivation, fx.name, fx.system, fx.signature, fx.equations)


def write_corpus(directory: str | Path = DATA_DIR) -> list[Path]:
    """Write every corpus fixture to ``directory/<name>.json``."""
    from .fixtures import corpus

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in corpus():
        p = directory / f"{name}.json"
        dump(fixture_file(name), p)
        out.append(p)
    return out


def packaged_files() -> list[Path]:
    return sorted(DATA_DIR.glob("*.json"))
