"""Cross-platform narrative-coordination analytics.

Scores message sources for coordinated synthetic-narrative behavior by
combining lexical diversity, temporal burstiness, rhetorical repetition,
and semantic homogenization into one ranked composite per event window.
"""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    CorpusError,
    EventWindow,
    Record,
    SourceSlice,
    detect_language,
    flag_duplicates,
    load_corpus,
    normalize_for_hash,
    slice_corpus,
)
from .config import ConfigError, PipelineConfig, load_config  # noqa: F401
from .lexical import (  # noqa: F401
    LexicalScore,
    char_trigram_entropy,
    lexical_score,
    mattr,
    tokenize,
    word_entropy,
)
from .temporal import (  # noqa: F401
    CoActivitySeries,
    OverlapMatrix,
    TemporalScore,
    burstiness,
    coactivity,
    hourly_overlap,
    posting_heatmap,
)
from .rhetoric import (  # noqa: F401
    RhetoricScore,
    TrigramProfile,
    near_dup_rate,
    r_score,
    shared_domains,
    shared_hashtags,
    trigram_profile,
)
from .semantic import (  # noqa: F401
    EmbeddingStore,
    SemanticScore,
    cross_source_matrix,
    h_score,
    load_embeddings,
    write_vector_file,
)
from .snc import (  # noqa: F401
    ComponentVector,
    SncRow,
    build_snc_rows,
    minmax_normalize,
    rank_event,
    snc_score,
)
from .report import ecdf, language_composition, volume_summary  # noqa: F401
