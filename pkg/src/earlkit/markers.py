"""Marker knowledge base: word lists, vocal and movement signatures.

Three rule classifiers turn already-extracted feature descriptors into
ranked emotion candidates; raw audio/video processing is out of scope.
Directions are categorical on purpose: the source findings state only
whether a property goes up or down for an emotion, never by how much, so
any magnitude would be invented.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import LexiconError, MarkerError
from .model import EmotionAnnotation, InlineText

# ---------------------------------------------------------------------------
# Basic-emotion -> motivated-behavior map (MacLean's classification)

BEHAVIOR_FOR_EMOTION = {
    "desire": "searching",
    "anger": "aggressive",
    "fear": "protective",
    "sadness": "dejected",
    "joy": "gratulant",
    "affection": "caressive",
}

# The word-list vocabulary says "sensuality (desire)"; the alias lets both
# vocabularies name the same behavior.
EMOTION_ALIASES = {"sensuality": "desire"}


def behavior_for_emotion(emotion: str) -> str:
    """Map a basic emotion to its motivated behavior label."""
    canonical = EMOTION_ALIASES.get(emotion, emotion)
    try:
        return BEHAVIOR_FOR_EMOTION[canonical]
    except KeyError:
        raise MarkerError(
            "UNKNOWN_EMOTION", f"{emotion!r} has no behavior mapping"
        ) from None


# ---------------------------------------------------------------------------
# Lexical markers

_TOKEN_RE = re.compile(r"[^a-z]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-letter boundaries."""
    return [t for t in _TOKEN_RE.split(text.lower()) if t]


@dataclass(frozen=True)
class Lexicon:
    """Emotion label -> set of lexical markers.

    Markers are stored tokenized (lowercase, space-joined); most are single
    words but multiword phrases such as "goose bumps" are kept whole and
    matched as contiguous token runs.
    """

    entries: dict[str, frozenset[str]]

    def marker_emotion(self) -> dict[str, str]:
        """Flat marker -> emotion view (markers are unique per lexicon)."""
        flat = {}
        for emotion, markers in self.entries.items():
            for marker in markers:
                flat[marker] = emotion
        return flat


def load_lexicon(data: bytes | str) -> Lexicon:
    """Parse the line-oriented lexicon format.

    One line per emotion: ``emotion: marker, marker, ...``; blank lines and
    ``#`` comments are skipped.  Markers are normalized through the same
    tokenizer used for matching.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    entries: dict[str, frozenset[str]] = {}
    seen: dict[str, str] = {}
    for line_no, line in enumerate(data.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        emotion, _, rest = line.partition(":")
        emotion = emotion.strip().lower()
        markers = set()
        for raw in rest.split(","):
            tokens = tokenize(raw)
            if not tokens:
                continue
            marker = " ".join(tokens)
            owner = seen.get(marker)
            if owner is not None and owner != emotion:
                raise LexiconError(
                    "DUPLICATE_MARKER",
                    f"line {line_no}: {marker!r} already assigned to {owner!r}",
                )
            seen[marker] = emotion
            markers.add(marker)
        if not emotion or not markers:
            raise LexiconError(
                "EMPTY_EMOTION", f"line {line_no}: emotion with no markers"
            )
        entries[emotion] = frozenset(markers | entries.get(emotion, frozenset()))
    return Lexicon(entries=entries)


def default_lexicon() -> Lexicon:
    """The bundled word-list lexicon (seven emotions)."""
    data = resources.files("earlkit.data").joinpath("table2.lex").read_bytes()
    return load_lexicon(data)


def tag_lexical(text: str, lexicon: Lexicon | None = None) -> list[tuple[EmotionAnnotation, list[str]]]:
    """Tag free text against a lexicon.

    Returns one ``(annotation, matched_tokens)`` pair per emotion with at
    least one marker hit, ordered alphabetically by emotion.  Intensity
    saturates at three hits; probability is the emotion's share of all
    matched tokens.
    """
    if lexicon is None:
        lexicon = default_lexicon()
    tokens = tokenize(text)
    hits: dict[str, list[str]] = {}

    phrase_markers = [
        (marker.split(" "), emotion)
        for marker, emotion in lexicon.marker_emotion().items()
        if " " in marker
    ]
    single = {m: e for m, e in lexicon.marker_emotion().items() if " " not in m}

    consumed = [False] * len(tokens)
    for parts, emotion in phrase_markers:
        n = len(parts)
        for i in range(len(tokens) - n + 1):
            if tokens[i : i + n] == parts and not any(consumed[i : i + n]):
                hits.setdefault(emotion, []).extend(parts)
                consumed[i : i + n] = [True] * n
    for i, token in enumerate(tokens):
        if consumed[i]:
            continue
        emotion = single.get(token)
        if emotion is not None:
            hits.setdefault(emotion, []).append(token)

    total = sum(len(matched) for matched in hits.values())
    results = []
    for emotion in sorted(hits):
        matched = hits[emotion]
        annotation = EmotionAnnotation(
            category=emotion,
            modality="language",
            intensity=min(1.0, len(matched) / 3),
            probability=len(matched) / total,
            scope=InlineText(text),
        )
        results.append((annotation, matched))
    return results


# ---------------------------------------------------------------------------
# Voice signatures

UP, DOWN, FLAT = "up", "down", "flat"
DOWNWARD, UPWARD = "downward", "upward"

_DIRECTIONS = (UP, DOWN, FLAT)
_CONTOURS = (DOWNWARD, UPWARD, FLAT)

VOICE_FIELDS = (
    "mean_f0",
    "f0_range",
    "f0_variability",
    "mean_energy",
    "high_freq_energy",
    "f0_contour",
    "articulation_rate",
)


@dataclass(frozen=True)
class VoiceFeatureDelta:
    """Directional changes of the seven vocal properties; flat is neutral."""

    mean_f0: str = FLAT
    f0_range: str = FLAT
    f0_variability: str = FLAT
    mean_energy: str = FLAT
    high_freq_energy: str = FLAT
    f0_contour: str = FLAT
    articulation_rate: str = FLAT

    def __post_init__(self):
        for name in VOICE_FIELDS:
            allowed = _CONTOURS if name == "f0_contour" else _DIRECTIONS
            value = getattr(self, name)
            if value not in allowed:
                raise ValueError(f"{name}={value!r}; expected one of {allowed}")


# Per-emotion expectations.  The hot-anger F0-range increase is folded into
# the single anger signature; disgust has no reliable vocal signature and
# is always scored 0.
VOICE_PATTERNS: dict[str, dict[str, str]] = {
    "anger": {
        "mean_f0": UP,
        "mean_energy": UP,
        "f0_variability": UP,
        "f0_range": UP,
        "high_freq_energy": UP,
        "f0_contour": DOWNWARD,
        "articulation_rate": UP,
    },
    "fear": {
        "mean_f0": UP,
        "f0_range": UP,
        "high_freq_energy": UP,
        "articulation_rate": UP,
    },
    "joy": {
        "mean_f0": UP,
        "f0_range": UP,
        "f0_variability": UP,
        "mean_energy": UP,
    },
    "sadness": {
        "mean_f0": DOWN,
        "f0_range": DOWN,
        "mean_energy": DOWN,
        "f0_contour": DOWNWARD,
    },
    "disgust": {},
}

_OPPOSITE_DIRECTION = {UP: DOWN, DOWN: UP, DOWNWARD: UPWARD, UPWARD: DOWNWARD}


@dataclass(frozen=True)
class RankedEmotion:
    label: str
    score: float
    matched_features: tuple[str, ...] = ()


RankedEmotions = list[RankedEmotion]


def _score_pattern(observed: dict[str, str], pattern: dict[str, str],
                   contradicts) -> tuple[float, tuple[str, ...]]:
    if not pattern:
        return 0.0, ()
    matched = []
    contradicted = 0
    for name, expected in pattern.items():
        value = observed[name]
        if value == expected:
            matched.append(name)
        elif contradicts(name, value, expected):
            contradicted += 1
    score = (len(matched) - contradicted) / len(pattern)
    return min(1.0, max(0.0, score)), tuple(matched)


def _rank(scored: dict[str, tuple[float, tuple[str, ...]]]) -> RankedEmotions:
    # Descending score, alphabetical among ties.
    order = sorted(scored, key=lambda label: (-scored[label][0], label))
    return [RankedEmotion(label, scored[label][0], scored[label][1]) for label in order]


def classify_voice(v: VoiceFeatureDelta) -> RankedEmotions:
    """Rank the five vocally-signed emotions against a feature delta.

    Match credit and contradiction penalty are symmetric: each pattern field
    the observation matches counts +1, each where it points the opposite way
    counts -1, flat counts nothing, and the sum is divided by pattern size
    and clamped to [0, 1].
    """
    observed = {name: getattr(v, name) for name in VOICE_FIELDS}

    def contradicts(_name: str, value: str, expected: str) -> bool:
        return value == _OPPOSITE_DIRECTION.get(expected)

    scored = {
        emotion: _score_pattern(observed, pattern, contradicts)
        for emotion, pattern in VOICE_PATTERNS.items()
    }
    return _rank(scored)


# ---------------------------------------------------------------------------
# Movement signatures

SHORT, MID, LONG = "short", "mid", "long"
FREQUENT, FEW = "frequent", "few"
OUTWARD, CLOSE, NEUTRAL = "outward_from_centre", "close_to_centre", "neutral"
DYNAMIC_HIGH = "dynamic_high"
SUSTAINED_HIGH = "sustained_high"
CONTINUOUSLY_LOW = "continuously_low"
DYNAMIC_VARYING = "dynamic_varying"

MOVEMENT_FIELDS = ("duration", "tempo_changes", "stop_length", "spatial_extent", "tension")

_MOVEMENT_VALUES = {
    "duration": (SHORT, MID, LONG),
    "tempo_changes": (FREQUENT, FEW, NEUTRAL),
    "stop_length": (SHORT, MID, LONG),
    "spatial_extent": (OUTWARD, CLOSE, NEUTRAL),
    "tension": (DYNAMIC_HIGH, SUSTAINED_HIGH, CONTINUOUSLY_LOW, DYNAMIC_VARYING, NEUTRAL),
}


@dataclass(frozen=True)
class MovementDescriptor:
    """Body-movement properties on the time/space/flow/weight dimensions.

    Defaults are the neutral value of each field, so an unspecified
    descriptor matches and contradicts nothing.
    """

    duration: str = MID
    tempo_changes: str = NEUTRAL
    stop_length: str = MID
    spatial_extent: str = NEUTRAL
    tension: str = NEUTRAL

    def __post_init__(self):
        for name in MOVEMENT_FIELDS:
            value = getattr(self, name)
            if value not in _MOVEMENT_VALUES[name]:
                raise ValueError(
                    f"{name}={value!r}; expected one of {_MOVEMENT_VALUES[name]}"
                )


MOVEMENT_PATTERNS: dict[str, dict[str, str]] = {
    "anger": {
        "duration": SHORT,
        "tempo_changes": FREQUENT,
        "stop_length": SHORT,
        "spatial_extent": OUTWARD,
        "tension": DYNAMIC_HIGH,
    },
    "fear": {
        "tempo_changes": FREQUENT,
        "stop_length": LONG,
        "spatial_extent": CLOSE,
        "tension": SUSTAINED_HIGH,
    },
    "grief": {
        "duration": LONG,
        "tempo_changes": FEW,
        "tension": CONTINUOUSLY_LOW,
    },
    "joy": {
        "tempo_changes": FREQUENT,
        "stop_length": LONG,
        "spatial_extent": OUTWARD,
        "tension": DYNAMIC_VARYING,
    },
}

# Only genuinely opposed values contradict; mid/neutral never do, and the
# two high-tension flavors are merely different, not opposed.
_MOVEMENT_OPPOSITES = {
    ("duration", SHORT): LONG,
    ("duration", LONG): SHORT,
    ("tempo_changes", FREQUENT): FEW,
    ("tempo_changes", FEW): FREQUENT,
    ("stop_length", SHORT): LONG,
    ("stop_length", LONG): SHORT,
    ("spatial_extent", OUTWARD): CLOSE,
    ("spatial_extent", CLOSE): OUTWARD,
    ("tension", DYNAMIC_HIGH): CONTINUOUSLY_LOW,
    ("tension", SUSTAINED_HIGH): CONTINUOUSLY_LOW,
}


def classify_movement(m: MovementDescriptor) -> RankedEmotions:
    """Rank the four movement-signed emotions; scoring as in classify_voice."""
    observed = {name: getattr(m, name) for name in MOVEMENT_FIELDS}

    def contradicts(name: str, value: str, expected: str) -> bool:
        opposite = _MOVEMENT_OPPOSITES.get((name, expected))
        if opposite is not None and value == opposite:
            return True
        # Opposition is symmetric: low tension is contradicted by either
        # high-tension flavor.
        return _MOVEMENT_OPPOSITES.get((name, value)) == expected

    scored = {
        emotion: _score_pattern(observed, pattern, contradicts)
        for emotion, pattern in MOVEMENT_PATTERNS.items()
    }
    return _rank(scored)


# ---------------------------------------------------------------------------
# Capture-source weights

# Capture convenience per source, worst listed condition governing:
# Good -> 1.0, Middle -> 0.6, Bad -> 0.2.
SOURCE_WEIGHTS = {
    "face": 1.0,
    "language_voice": 1.0,
    "movement_kinematic": 0.6,
    "movement_kinetic": 0.2,
}

#: Expressive channel recorded on annotations produced from each source.
SOURCE_MODALITY = {
    "face": "face",
    "language_voice": "voice",
    "movement_kinematic": "movement",
    "movement_kinetic": "movement",
}


def base_weight_for_source(source: str) -> float:
    """Base fusion weight for a capture source."""
    try:
        return SOURCE_WEIGHTS[source]
    except KeyError:
        raise MarkerError("UNKNOWN_SOURCE", f"{source!r} is not a capture source") from None
