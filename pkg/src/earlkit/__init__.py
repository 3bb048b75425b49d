"""earlkit: parse, validate, classify, fuse, and act on EARL emotion annotations."""

from .errors import (
    EarlError,
    FusionError,
    LexiconError,
    MarkerError,
    ParseError,
    PolicyError,
    ScopeError,
)
from .model import (
    DEFAULT_PROFILE,
    REGULATION_TYPES,
    UNSCOPED,
    ComplexEmotion,
    EmotionAnnotation,
    Finding,
    InlineText,
    Reference,
    ReferencedTimeSpan,
    Scope,
    TimeSpan,
    Unscoped,
    ValidationReport,
    VocabularyProfile,
    dominant_constituent,
    validate_annotation,
)
from .earl_xml import (
    AnnotationDocument,
    ClipSegment,
    MediaObject,
    ScopeTarget,
    TextSegment,
    load_profile,
    parse_document,
    resolve_scope,
    serialize_document,
)
from .markers import (
    Lexicon,
    MovementDescriptor,
    RankedEmotion,
    VoiceFeatureDelta,
    base_weight_for_source,
    behavior_for_emotion,
    classify_movement,
    classify_voice,
    default_lexicon,
    load_lexicon,
    tag_lexical,
)
from .fusion import (
    FusedEstimate,
    FusionConfig,
    MarkerEvidence,
    TemporalState,
    fill_missing,
    fuse_instant,
    load_config,
    to_complex_emotion,
    update_temporal,
)
from .needs import (
    AccessPolicy,
    Decision,
    NeedProfile,
    PolicyRule,
    decide_access,
    infer_needs,
    load_policy,
)

__version__ = "0.1.0"
