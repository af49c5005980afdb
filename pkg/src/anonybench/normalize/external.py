"""Uniform application of anonymization techniques to programs.

A TransformerSpec names a technique: the identity, the built-in
normalizer, built-in clue elimination, or an external command invoked on
temp files. apply_transformer and transform_text run one; failures of
any kind surface as TransformerError so harness code can record the
sample as excluded instead of crashing a whole evaluation.
"""

from __future__ import annotations

import dataclasses
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..corpus import Program
from ..errors import AnonybenchError, ParameterError, TransformerError
from ..cparse import lex, parse, to_source
from .declue import DeclueOptions, eliminate_clues
from .rules import normalize

KINDS = ("identity", "builtin-normalize", "clue-elimination", "external-command")

_STAGE = {
    "identity": None,
    "builtin-normalize": "normalized",
    "clue-elimination": "transformed",
    "external-command": "transformed",
}


@dataclass(frozen=True)
class TransformerSpec:
    kind: str
    command: str = ""
    options: DeclueOptions | None = None
    timeout: float = 60.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown transformer kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "external-command":
            if "{in}" not in self.command:
                raise ParameterError("external command template must contain {in}")
        elif self.command:
            raise ParameterError(f"transformer kind {self.kind!r} takes no command")
        if self.timeout <= 0:
            raise ParameterError("timeout must be positive")

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.command:
            out["command"] = self.command
        if self.options is not None:
            out["options"] = dataclasses.asdict(self.options)
        return out


def spec_from_name(name: str, options: DeclueOptions | None = None) -> TransformerSpec:
    """Build a spec from a short CLI name: identity, normalize, declue,
    or cmd:<template>."""
    if name == "identity":
        return TransformerSpec("identity")
    if name == "normalize":
        return TransformerSpec("builtin-normalize")
    if name == "declue":
        return TransformerSpec("clue-elimination", options=options)
    if name.startswith("cmd:"):
        return TransformerSpec("external-command", command=name[4:])
    raise ParameterError(
        f"unknown technique {name!r}; expected identity, normalize, declue, or cmd:<template>"
    )


def transform_text(source: str, spec: TransformerSpec) -> str:
    """Apply a transformer to source text; TransformerError on failure."""
    if spec.kind == "identity":
        return source
    if spec.kind == "builtin-normalize":
        try:
            return to_source(normalize(parse(lex(source))))
        except AnonybenchError as exc:
            raise TransformerError(f"normalization failed: {exc}") from exc
    if spec.kind == "clue-elimination":
        try:
            unit = parse(lex(source))
            unit = normalize(unit)
            unit = eliminate_clues(unit, spec.options)
            return to_source(unit)
        except AnonybenchError as exc:
            raise TransformerError(f"clue elimination failed: {exc}") from exc
    return _run_external(source, spec)


def _run_external(source: str, spec: TransformerSpec) -> str:
    with tempfile.TemporaryDirectory(prefix="anonybench-xform-") as tmp:
        in_path = Path(tmp) / "input.c"
        out_path = Path(tmp) / "output.c"
        in_path.write_text(source, encoding="utf-8")
        command = spec.command.replace("{in}", str(in_path)).replace("{out}", str(out_path))
        try:
            proc = subprocess.run(
                shlex.split(command),
                capture_output=True,
                text=True,
                timeout=spec.timeout,
            )
        except subprocess.TimeoutExpired as exc:
            raise TransformerError(f"external command timed out after {spec.timeout}s") from exc
        except OSError as exc:
            raise TransformerError(f"external command failed to start: {exc}") from exc
        if proc.returncode != 0:
            tail = proc.stderr.strip().splitlines()[-3:]
            raise TransformerError(
                "external command exited with status %d%s"
                % (proc.returncode, (": " + " | ".join(tail)) if tail else "")
            )
        if "{out}" in spec.command:
            if not out_path.exists():
                raise TransformerError("external command produced no output file")
            result = out_path.read_text(encoding="utf-8")
        else:
            result = proc.stdout
        if not result.strip():
            raise TransformerError("external command produced empty output")
        return result


def apply_transformer(program: Program, spec: TransformerSpec) -> Program:
    """Apply a transformer to a program, tagging the output stage."""
    text = transform_text(program.source, spec)
    stage = _STAGE[spec.kind] or program.stage
    return dataclasses.replace(program, source=text, stage=stage)
