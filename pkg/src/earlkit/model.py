"""Core domain types for emotion annotations and their structural validation.

An annotation describes one emotional state through a category label,
continuous dimensions, and/or appraisal values, optionally qualified by
intensity, labeller probability, regulation attempts, and the modality it
was observed in.  A complex emotion groups co-occurring constituent
annotations under one shared scope.

All types are immutable after construction and all operations are pure,
so everything here is safe for unrestricted concurrent use.  Construction
is deliberately permissive: invariants are checked by
:func:`validate_annotation`, which reports problems instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

REGULATION_TYPES = ("simulate", "suppress", "amplify", "attenuate")

#: Dimension and appraisal values live on a signed unit scale.
DESCRIPTOR_RANGE = (-1.0, 1.0)
#: Intensity, probability and regulation values live on the unit interval.
UNIT_RANGE = (0.0, 1.0)


# ---------------------------------------------------------------------------
# Scope variants


@dataclass(frozen=True)
class InlineText:
    """Scope over a piece of text enclosed by the annotation itself."""

    text: str


@dataclass(frozen=True)
class Reference:
    """Stand-off scope: the annotation refers to an external object by URI."""

    uri: str


@dataclass(frozen=True)
class TimeSpan:
    """Scope over a [start, end) interval of the annotated clip, in seconds."""

    start: float
    end: float


@dataclass(frozen=True)
class ReferencedTimeSpan:
    """Stand-off scope combined with a time interval within the referenced clip."""

    uri: str
    start: float
    end: float


@dataclass(frozen=True)
class Unscoped:
    """No scope of its own (e.g. a constituent inheriting the group scope)."""


Scope = Union[InlineText, Reference, TimeSpan, ReferencedTimeSpan, Unscoped]

UNSCOPED = Unscoped()


# ---------------------------------------------------------------------------
# Annotations


@dataclass(frozen=True)
class EmotionAnnotation:
    """A single emotion statement.

    At least one descriptor (category, dimensions, or appraisals) must be
    present for the annotation to validate.  Missing ``intensity`` or
    ``probability`` mean the emotion is asserted outright; downstream
    consumers treat both as 1.0.
    """

    category: str | None = None
    dimensions: dict[str, float] = field(default_factory=dict)
    appraisals: dict[str, float] = field(default_factory=dict)
    intensity: float | None = None
    probability: float | None = None
    regulation: dict[str, float] = field(default_factory=dict)
    modality: str | None = None
    scope: Scope = UNSCOPED


@dataclass(frozen=True)
class ComplexEmotion:
    """Co-occurring constituent emotions sharing one scope.

    Constituents are kept in document order; the scope lives on the group,
    not on the constituents.
    """

    constituents: tuple[EmotionAnnotation, ...]
    scope: Scope = UNSCOPED

    def __post_init__(self):
        object.__setattr__(self, "constituents", tuple(self.constituents))


AnnotationItem = Union[EmotionAnnotation, ComplexEmotion]


# ---------------------------------------------------------------------------
# Vocabulary profiles


@dataclass(frozen=True)
class VocabularyProfile:
    """User-definable descriptor vocabularies.

    An empty set acts as a wildcard: any label is accepted for that slot.
    This keeps corpora without an explicit profile parseable; restriction
    is opt-in by listing labels.
    """

    categories: frozenset[str] = frozenset()
    dimension_names: frozenset[str] = frozenset()
    appraisal_names: frozenset[str] = frozenset()
    modalities: frozenset[str] = frozenset()

    def __post_init__(self):
        for name in ("categories", "dimension_names", "appraisal_names", "modalities"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    def allows_category(self, label: str) -> bool:
        return not self.categories or label in self.categories

    def allows_modality(self, label: str) -> bool:
        return not self.modalities or label in self.modalities


#: With every set empty the default profile restricts nothing: no label
#: vocabulary can be prescribed, so restriction is always opt-in.
DEFAULT_PROFILE = VocabularyProfile()

#: Classic descriptor names, used by the parser to route attributes when the
#: active profile does not claim them.  They carry no restriction.
CLASSIC_DIMENSION_NAMES = frozenset({"arousal", "valence", "power"})
CLASSIC_APPRAISAL_NAMES = frozenset(
    {
        "suddenness",
        "intrinsic_pleasantness",
        "goal_conduciveness",
        "relevance_self_concerns",
    }
)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" or "warning"
    code: str
    message: str
    location: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    findings: tuple[Finding, ...]

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]


def _in_range(value: float, lo: float, hi: float) -> bool:
    return lo <= value <= hi  # NaN fails both comparisons, as intended


def _check_scope(scope: Scope, loc: str, out: list[Finding]) -> None:
    if isinstance(scope, (Reference, ReferencedTimeSpan)) and not scope.uri:
        out.append(Finding("error", "MALFORMED_SCOPE", "reference URI is empty", loc))
    if isinstance(scope, (TimeSpan, ReferencedTimeSpan)):
        if scope.start < 0:
            out.append(
                Finding("error", "MALFORMED_SCOPE", "time span start is negative", loc)
            )
        if not scope.end > scope.start:
            out.append(
                Finding(
                    "error",
                    "MALFORMED_SCOPE",
                    f"time span end {scope.end} must exceed start {scope.start}",
                    loc,
                )
            )


def _check_annotation(
    a: EmotionAnnotation, profile: VocabularyProfile, loc: str, out: list[Finding]
) -> None:
    if a.category is None and not a.dimensions and not a.appraisals:
        out.append(
            Finding(
                "error",
                "MISSING_DESCRIPTOR",
                "annotation carries no category, dimensions, or appraisals",
                loc,
            )
        )

    if a.category is not None and not profile.allows_category(a.category):
        out.append(
            Finding(
                "error",
                "UNKNOWN_CATEGORY",
                f"category {a.category!r} not in profile",
                f"{loc}.category",
            )
        )

    lo, hi = DESCRIPTOR_RANGE
    for name, value in a.dimensions.items():
        where = f"{loc}.{name}"
        if profile.dimension_names and name not in profile.dimension_names:
            out.append(
                Finding("error", "UNKNOWN_DIMENSION", f"dimension {name!r} not in profile", where)
            )
        if not _in_range(value, lo, hi):
            out.append(
                Finding("error", "RANGE", f"{name}={value} outside [{lo}, {hi}]", where)
            )
    for name, value in a.appraisals.items():
        where = f"{loc}.{name}"
        if profile.appraisal_names and name not in profile.appraisal_names:
            out.append(
                Finding("error", "UNKNOWN_APPRAISAL", f"appraisal {name!r} not in profile", where)
            )
        if not _in_range(value, lo, hi):
            out.append(
                Finding("error", "RANGE", f"{name}={value} outside [{lo}, {hi}]", where)
            )

    lo, hi = UNIT_RANGE
    if a.intensity is not None and not _in_range(a.intensity, lo, hi):
        out.append(
            Finding(
                "error",
                "RANGE",
                f"intensity={a.intensity} outside [{lo}, {hi}]",
                f"{loc}.intensity",
            )
        )
    if a.probability is not None and not _in_range(a.probability, lo, hi):
        out.append(
            Finding(
                "error",
                "RANGE",
                f"probability={a.probability} outside [{lo}, {hi}]",
                f"{loc}.probability",
            )
        )

    for name, value in a.regulation.items():
        where = f"{loc}.{name}"
        if name not in REGULATION_TYPES:
            out.append(
                Finding(
                    "error",
                    "UNKNOWN_REGULATION",
                    f"regulation key {name!r} not one of {'/'.join(REGULATION_TYPES)}",
                    where,
                )
            )
        elif not _in_range(value, lo, hi):
            out.append(
                Finding("error", "RANGE", f"{name}={value} outside [{lo}, {hi}]", where)
            )
        elif value == 0.0:
            # A zero regulation value asserts "no regulation": legal but inert.
            out.append(
                Finding("warning", "NOOP_REGULATION", f"{name}=0 has no effect", where)
            )

    if a.modality is not None and not profile.allows_modality(a.modality):
        out.append(
            Finding(
                "error",
                "UNKNOWN_MODALITY",
                f"modality {a.modality!r} not in profile",
                f"{loc}.modality",
            )
        )

    _check_scope(a.scope, f"{loc}.scope", out)


def validate_annotation(
    item: AnnotationItem,
    profile: VocabularyProfile = DEFAULT_PROFILE,
    strict: bool = False,
) -> ValidationReport:
    """Check one annotation or complex emotion against a vocabulary profile.

    All problems are reported, never raised; findings come back in document
    order so identical inputs produce identical reports.  With ``strict``
    every warning is escalated to an error.
    """
    findings: list[Finding] = []
    if isinstance(item, ComplexEmotion):
        if len(item.constituents) < 2:
            findings.append(
                Finding(
                    "error",
                    "TOO_FEW_CONSTITUENTS",
                    f"complex emotion has {len(item.constituents)} constituent(s), needs at least 2",
                    "complex",
                )
            )
        for i, constituent in enumerate(item.constituents):
            loc = f"complex.constituent[{i}]"
            if isinstance(constituent.scope, (Reference, TimeSpan, ReferencedTimeSpan)):
                findings.append(
                    Finding(
                        "error",
                        "CONSTITUENT_SCOPE",
                        "constituent carries its own stand-off scope; scope lives on the group",
                        f"{loc}.scope",
                    )
                )
            _check_annotation(constituent, profile, loc, findings)
        _check_scope(item.scope, "complex.scope", findings)
    else:
        _check_annotation(item, profile, "annotation", findings)

    if strict:
        findings = [
            Finding("error", f.code, f.message, f.location) if f.severity == "warning" else f
            for f in findings
        ]
    ok = not any(f.severity == "error" for f in findings)
    return ValidationReport(ok=ok, findings=tuple(findings))


def effective_intensity(a: EmotionAnnotation) -> float:
    """Intensity with the unqualified-annotation default of 1.0 applied."""
    return 1.0 if a.intensity is None else a.intensity


def effective_probability(a: EmotionAnnotation) -> float:
    """Probability with the unqualified-annotation default of 1.0 applied."""
    return 1.0 if a.probability is None else a.probability


def dominant_constituent(c: ComplexEmotion) -> EmotionAnnotation:
    """Return the constituent with the highest intensity.

    Missing intensity counts as 1.0; ties go to the earliest constituent
    in document order.
    """
    return max(c.constituents, key=effective_intensity)
