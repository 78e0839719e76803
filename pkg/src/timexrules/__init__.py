"""Learn time-expression normalization rules from TIMEX3-annotated text.

Each rule pairs a surface pattern ("last MONTH:$1") with a sequence of
calendar operations ("(ToLast[year], ModifyEnum[$1])") that turns the
document creation time into the expression's value.
"""

from .capture import CaptureResult, CaptureTask, OperationSpace, capture
from .corpus import AnnotatedExpression, EvalReport, evaluate, ingest, ingest_timeml, ingest_tsv
from .errors import (
    BadLine,
    CorpusError,
    EmptyCorpus,
    KindConflict,
    MalformedXml,
    MissingDct,
    NoSequenceFound,
    TemporalError,
    Unnormalizable,
)
from .estimator import TimexNormalizer
from .lexicon import Lexicon, Pattern, is_stopword, match, num_vals, tokenize
from .normalizer import NormalizationResult, merge, normalize, segment, try_normalize
from .operations import (
    Operation,
    execute,
    format_sequence,
    is_redundant,
    op,
    parse_sequence,
    sort_sequence,
)
from .rules import Rule, RuleStore, abstract_candidates, learn
from .temporal import (
    ApproxRef,
    Duration,
    Instant,
    TimeField,
    TimeUnit,
    field_diff,
    parse_timex_value,
    serialize_timex_value,
    timex_type,
    truncate,
)

__version__ = "0.1.0"
