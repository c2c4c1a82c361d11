"""autownet: build a wordnet (senses + synsets) from a corpus and sentence embeddings.

The pipeline: ingest raw documents into a sentence store, attach one
embedding per sentence (imported from a model run or mocked for tests),
induce word senses with a three-pass affinity-propagation procedure, merge
senses into synsets with threshold-stopped agglomerative clustering, then
evaluate the result against reference data and persist it.
"""

from .cluster import (
    APParams,
    Cluster,
    SimilarityMatrix,
    affinity_propagation,
    agglomerative_cosine,
    purge,
    similarity_matrix,
    trim,
)
from .corpus import (
    CorpusStore,
    RawDocument,
    SeedWordPolicy,
    SentenceRecord,
    corpus_stats,
    extract_sentences,
    filter_seed_words,
    segment_sentences,
)
from .embeddings import (
    EmbeddingStore,
    cosine_similarity,
    mean_embedding,
    mock_embed,
    read_embedding_file,
    write_embedding_file,
)
from .preprocess import PreprocessingRule, apply_preprocessing, default_rules
from .senses import (
    PipelineParams,
    Sense,
    SenseInventory,
    StepParams,
    build_sense_inventory,
    induce_senses,
    sense_distribution,
)
from .store import (
    WordNetResource,
    export_wordnet,
    load_inventory,
    load_wordnet,
    validate_resource,
    wordnet_stats,
    write_inventory,
)
from .synsets import (
    ReferenceSynset,
    Synset,
    compare_synsets,
    induce_synsets,
    jaccard,
    synset_size_report,
)
from .wsd import (
    EvaluationRecord,
    WSDResult,
    disambiguate,
    evaluate_sense_validity,
    sense_match_matrix,
)

__version__ = "0.1.0"
