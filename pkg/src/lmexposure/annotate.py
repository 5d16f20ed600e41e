"""Rubric-based exposure annotation through a pluggable classifier client.

A classifier client is anything with a ``complete(prompt_text, decode_config)``
method returning response text and a ``capability`` attribute declaring
itself ``"serial"`` or ``"concurrent"``. The harness renders one prompt per
occupation, requests ``n_samples`` independent completions, parses each
response into one of the four exposure categories, and retries unparseable
or failed requests per sample before giving up on the whole run.

Live model adapters are out-of-tree shims satisfying the same interface;
this module ships only deterministic mock clients for reproducible runs.
"""

from __future__ import annotations

import json
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol, Sequence, runtime_checkable

from .errors import ComputationError, InputFormatError
from .taxonomy import OccupationCode, OccupationNode, Taxonomy


class ExposureCategory(Enum):
    """Rubric label for how much a language model could speed up an occupation."""

    E0 = "E0"  # no useful exposure
    E1 = "E1"  # halving of completion time already feasible via plain text interfaces
    E2 = "E2"  # halving feasible with extra application work or domain tuning
    E3 = "E3"  # halving additionally requires image capabilities

    @classmethod
    def from_token(cls, token: str) -> "ExposureCategory":
        return cls(token.upper())


DEFAULT_RUBRIC = """Assign exactly one exposure category to the occupation:
- E0: language models offer no useful time savings for this occupation, for
  example because the work is inherently physical.
- E1: cutting the time to complete the occupation's work in half, at equal
  quality, is already feasible through a plain text interface to a language
  model.
- E2: the same halving is feasible, but only once current model capabilities
  are deployed through purpose-built applications, extra inputs, or
  domain-specific tuning.
- E3: the halving additionally requires image understanding or generation on
  top of text capabilities.
"""

_PROMPT_TEMPLATE = """[language: {language_tag}]
Occupation title: {title}
Occupation description: {description}

{rubric}
Answer with exactly one token from {{E0, E1, E2, E3}} and nothing else."""


class EmptyDescriptionError(ComputationError):
    """Occupation has no description to submit for annotation."""


class NoCategoryFound(ComputationError):
    """Response text contains none of the four category tokens."""


class AmbiguousResponse(ComputationError):
    """Response text contains two or more distinct category tokens."""


class AnnotationError(ComputationError):
    """A sample could not be collected within its retry budget."""


@dataclass(frozen=True)
class RubricPrompt:
    """Deterministic prompt payload for one occupation."""

    occupation_title: str
    occupation_description: str
    rubric_text: str
    language_tag: str = "zh"

    def text(self) -> str:
        return _PROMPT_TEMPLATE.format(
            language_tag=self.language_tag,
            title=self.occupation_title,
            description=self.occupation_description,
            rubric=self.rubric_text,
        )


def render_prompt(
    node: OccupationNode, rubric: str = DEFAULT_RUBRIC, language_tag: str = "zh"
) -> RubricPrompt:
    """Build the annotation prompt for one occupation node.

    Occupations with empty descriptions cannot be asked about and raise
    ``EmptyDescriptionError``.
    """
    if not node.description.strip():
        raise EmptyDescriptionError(
            f"occupation {node.code.raw!r} has an empty description"
        )
    return RubricPrompt(
        occupation_title=node.title,
        occupation_description=node.description,
        rubric_text=rubric,
        language_tag=language_tag,
    )


_TOKEN_RE = re.compile(r"(?<![A-Za-z0-9])[eE][0-3](?![A-Za-z0-9])")


def parse_category(response: str) -> ExposureCategory:
    """Extract the single category token from a response.

    Tokens are matched case-insensitively at word boundaries. Exactly one
    distinct token must be present: none raises ``NoCategoryFound``, two or
    more distinct ones raise ``AmbiguousResponse``.
    """
    tokens = {m.group(0).upper() for m in _TOKEN_RE.finditer(response)}
    if not tokens:
        raise NoCategoryFound(f"no exposure category token in response {response!r}")
    if len(tokens) > 1:
        raise AmbiguousResponse(
            f"multiple exposure category tokens {sorted(tokens)} in response {response!r}"
        )
    return ExposureCategory.from_token(tokens.pop())


@runtime_checkable
class ClassifierClient(Protocol):
    """Minimal client surface: one completion call plus a concurrency flag."""

    capability: str  # "serial" or "concurrent"

    def complete(self, prompt_text: str, decode_config: Mapping[str, object]) -> str:
        ...


@dataclass
class AnnotationRun:
    """All samples collected for one (model, occupation) pair."""

    model_id: str
    occupation_code: OccupationCode
    samples: list[ExposureCategory]
    raw_responses: list[str]

    def __post_init__(self) -> None:
        if len(self.samples) != len(self.raw_responses):
            raise ComputationError("samples and raw_responses must align one-to-one")


def _collect_sample(
    client: ClassifierClient,
    prompt_text: str,
    decode_config: Mapping[str, object],
    max_retries: int,
) -> tuple[ExposureCategory, str]:
    attempts = max_retries + 1
    last_error: Exception | None = None
    for _ in range(attempts):
        try:
            raw = client.complete(prompt_text, decode_config)
            return parse_category(raw), raw
        except (NoCategoryFound, AmbiguousResponse) as exc:
            last_error = exc
        except Exception as exc:  # transport failure from the client shim
            last_error = exc
    raise AnnotationError(
        f"sample failed after {attempts} attempts: {last_error}"
    ) from last_error


def annotate_occupation(
    client: ClassifierClient,
    node: OccupationNode,
    *,
    model_id: str,
    rubric: str = DEFAULT_RUBRIC,
    language_tag: str = "zh",
    n_samples: int = 8,
    max_retries: int = 2,
    in_flight: int = 1,
    decode_config: Mapping[str, object] | None = None,
) -> AnnotationRun:
    """Collect ``n_samples`` parsed categories for one occupation.

    Each sample is an independent request; unparseable responses and
    transport failures are retried up to ``max_retries`` times per sample.
    When the client declares itself ``"concurrent"`` and ``in_flight`` > 1,
    samples are dispatched on a thread pool and reassembled by sample index,
    so the output order always equals request order.
    """
    if n_samples < 1:
        raise ComputationError(f"n_samples must be >= 1, got {n_samples}")
    prompt_text = render_prompt(node, rubric, language_tag).text()
    config = dict(decode_config or {})

    concurrent = getattr(client, "capability", "serial") == "concurrent" and in_flight > 1
    if concurrent:
        results: list[tuple[ExposureCategory, str]] = [None] * n_samples  # type: ignore[list-item]
        with ThreadPoolExecutor(max_workers=min(in_flight, n_samples)) as pool:
            futures = {
                pool.submit(_collect_sample, client, prompt_text, config, max_retries): i
                for i in range(n_samples)
            }
            for future, i in futures.items():
                results[i] = future.result()
    else:
        results = [
            _collect_sample(client, prompt_text, config, max_retries)
            for _ in range(n_samples)
        ]

    return AnnotationRun(
        model_id=model_id,
        occupation_code=node.code,
        samples=[cat for cat, _ in results],
        raw_responses=[raw for _, raw in results],
    )


def annotate_nodes(
    client: ClassifierClient,
    nodes: Iterable[OccupationNode],
    *,
    model_id: str,
    **kwargs,
) -> list[AnnotationRun]:
    """Annotate several occupations in order; see ``annotate_occupation``."""
    return [
        annotate_occupation(client, node, model_id=model_id, **kwargs) for node in nodes
    ]


# --- deterministic mock clients -------------------------------------------


class FixedMockClient:
    """Always answers with the same string."""

    capability = "serial"

    def __init__(self, answer: str):
        self.answer = answer

    def complete(self, prompt_text: str, decode_config: Mapping[str, object]) -> str:
        return self.answer


class CycleMockClient:
    """Cycles through a fixed answer list across calls."""

    capability = "serial"

    def __init__(self, answers: Sequence[str]):
        if not answers:
            raise InputFormatError("cycle mock needs at least one answer")
        self.answers = list(answers)
        self._calls = 0

    def complete(self, prompt_text: str, decode_config: Mapping[str, object]) -> str:
        answer = self.answers[self._calls % len(self.answers)]
        self._calls += 1
        return answer


class ScriptedMockClient:
    """Answers from a per-occupation script.

    The script maps occupation codes to answer lists; because the client
    interface only sees prompt text, the occupation is recovered by matching
    the known titles against the rendered prompt, which always carries the
    title on its own line. Each occupation's list is cycled independently.
    """

    capability = "serial"

    def __init__(self, answers_by_code: Mapping[str, Sequence[str]], taxonomy: Taxonomy):
        self._by_title: dict[str, list[str]] = {}
        self._calls: dict[str, int] = {}
        for code, answers in answers_by_code.items():
            if not answers:
                raise InputFormatError(f"empty answer list for occupation {code!r}")
            title = taxonomy.node(code).title
            self._by_title[title] = list(answers)
            self._calls[title] = 0

    def complete(self, prompt_text: str, decode_config: Mapping[str, object]) -> str:
        for line in prompt_text.splitlines():
            if line.startswith("Occupation title: "):
                title = line[len("Occupation title: "):]
                break
        else:
            raise InputFormatError("prompt carries no occupation title line")
        if title not in self._by_title:
            raise InputFormatError(f"no scripted answers for occupation titled {title!r}")
        answers = self._by_title[title]
        index = self._calls[title]
        self._calls[title] = index + 1
        return answers[index % len(answers)]


def load_mock_client(
    source: str | Path, taxonomy: Taxonomy | None = None
) -> ClassifierClient:
    """Build a mock client from its JSON configuration file.

    Recognized shapes: ``{"kind": "fixed", "answer": "E1"}``,
    ``{"kind": "cycle", "answers": [...]}`` and
    ``{"kind": "scripted", "answers": {"2-06": ["E1", ...]}}`` (the scripted
    kind needs a taxonomy to resolve codes to titles).
    """
    path = str(source)
    try:
        config = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid mock configuration JSON: {exc}", path=path)
    kind = config.get("kind")
    if kind == "fixed":
        return FixedMockClient(str(config["answer"]))
    if kind == "cycle":
        return CycleMockClient([str(a) for a in config["answers"]])
    if kind == "scripted":
        if taxonomy is None:
            raise InputFormatError(
                "scripted mock configuration needs a taxonomy to map codes to titles",
                path=path,
            )
        return ScriptedMockClient(config["answers"], taxonomy)
    raise InputFormatError(f"unknown mock client kind {kind!r}", path=path)


# --- annotation store -------------------------------------------------------


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class LogicalClock:
    """Deterministic stand-in clock: fixed epoch, one second per reading.

    Used for mock-backed runs so repeated runs produce byte-identical
    record files while still carrying a well-formed timestamp per record.
    """

    def __init__(self, start: str = "2000-01-01T00:00:00+00:00"):
        self._current = datetime.fromisoformat(start)
        self._lock = threading.Lock()

    def __call__(self) -> str:
        with self._lock:
            stamp = self._current
            self._current = stamp + timedelta(seconds=1)
        return stamp.isoformat(timespec="seconds")


@dataclass
class AnnotationStore:
    """Append-only JSON-lines record of annotation runs."""

    path: Path
    clock: Callable[[], str] = field(default=utc_now_iso)

    def append(self, runs: Iterable[AnnotationRun]) -> None:
        """Append one record per run in a single buffered write."""
        lines = [self._record_line(run) for run in runs]
        payload = "".join(lines)
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(payload)
            handle.flush()

    def _record_line(self, run: AnnotationRun) -> str:
        record = {
            "model_id": run.model_id,
            "code": run.occupation_code.raw,
            "timestamp": self.clock(),
            "raw_responses": run.raw_responses,
            "samples": [s.value for s in run.samples],
        }
        return json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n"


def read_annotation_store(source: str | Path) -> list[AnnotationRun]:
    """Parse a JSON-lines annotation record file back into runs."""
    path = str(source)
    runs: list[AnnotationRun] = []
    with open(source, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                runs.append(
                    AnnotationRun(
                        model_id=record["model_id"],
                        occupation_code=OccupationCode.parse(record["code"]),
                        samples=[ExposureCategory(v) for v in record["samples"]],
                        raw_responses=list(record["raw_responses"]),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise InputFormatError(
                    f"bad annotation record: {exc}", path=path, line=line_no
                ) from None
    return runs
