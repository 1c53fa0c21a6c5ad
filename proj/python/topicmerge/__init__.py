"""Python interface to the topic merge prediction core."""

try:
    from ._topicmerge import (
        TopicMergeError,
        abbreviation_pair,
        corpus_stats,
        jaro_winkler,
        overlap,
        synth_corpus,
        tokenize,
        train_and_eval,
    )
except ImportError:  # in-tree builds put the extension next to the build dir
    from _topicmerge import (
        TopicMergeError,
        abbreviation_pair,
        corpus_stats,
        jaro_winkler,
        overlap,
        synth_corpus,
        tokenize,
        train_and_eval,
    )

__all__ = [
    "TopicMergeError",
    "abbreviation_pair",
    "corpus_stats",
    "jaro_winkler",
    "overlap",
    "synth_corpus",
    "tokenize",
    "train_and_eval",
]
