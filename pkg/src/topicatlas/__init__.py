"""topicatlas: hierarchical topic maps, trends and bubble-treemap layouts.

Pipeline: ingest -> preprocess -> train (two LDA models) -> hierarchy ->
trends -> layout -> export. Every stage is a pure function of its inputs and
the configured seed; ``topicatlas.cli`` orchestrates them from a config file.
"""

from .cluster import Dendrogram, agglomerate, cosine_distance_matrix, cut
from .corpus import Corpus, Document, LoadReport, ingest
from .export import AtlasBundle, build_bundle, bundle_from_json, bundle_to_json, search
from .hierarchy import (
    TopicHierarchy,
    assign_subtopics,
    build_hierarchy,
    label_topic,
    topic_weight,
)
from .lda import Hyperparams, SamplerState, TopicModel, doc_vector, log_likelihood, train
from .layout import Bubble, BubbleMap, layout_map, render_svg, smallest_enclosing_circle
from .textprep import (
    PreprocessOptions,
    TokenizedCorpus,
    Vocabulary,
    normalize_text,
    preprocess,
)
from .trends import TrendSeries, topic_trend

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Document", "LoadReport", "ingest",
    "PreprocessOptions", "TokenizedCorpus", "Vocabulary", "normalize_text", "preprocess",
    "Hyperparams", "SamplerState", "TopicModel", "train", "log_likelihood", "doc_vector",
    "TopicHierarchy", "assign_subtopics", "build_hierarchy", "label_topic", "topic_weight",
    "TrendSeries", "topic_trend",
    "Dendrogram", "agglomerate", "cosine_distance_matrix", "cut",
    "Bubble", "BubbleMap", "layout_map", "render_svg", "smallest_enclosing_circle",
    "AtlasBundle", "build_bundle", "bundle_to_json", "bundle_from_json", "search",
    "__version__",
]
