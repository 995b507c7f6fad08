"""Corpus ingestion: sentence splitting, word tokenization, vocabulary
construction with stop/rare filtering, and sentence deduplication.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCorpusError, FormatError

# terminator ('.', '!', '?') followed by whitespace ends a sentence
_BOUNDARY = re.compile(r"(?<=[.!?])\s+")
_SPLIT_CHARS = re.compile(r"[\s/\\-]+")
_NON_ALNUM = re.compile(r"[^a-z0-9]+")
_DIGIT_RUN = re.compile(r"[0-9]+")


@dataclass
class Document:
    """One clinical note: raw text pre-split into sentences, or sentences
    already tokenized into opaque code lists."""

    patient_id: str
    doc_id: str
    sentences: list

    def validate(self):
        if not self.patient_id or not self.doc_id:
            raise FormatError("document requires non-empty patient_id and doc_id")
        if not self.sentences:
            raise FormatError(f"document {self.doc_id!r} has no sentences")


def split_sentences(raw_text) -> list[str]:
    """Split raw text at sentence terminators. Pre-split input (a list of
    sentence strings) passes through unchanged."""
    if isinstance(raw_text, list):
        return [s for s in raw_text if str(s).strip()]
    parts = _BOUNDARY.split(raw_text)
    return [p.strip() for p in parts if p.strip()]


def word_tokenize(sentence: str) -> list[str]:
    """Lowercase, split on whitespace/slashes/hyphens, strip punctuation,
    collapse digit runs to '#'. Deterministic; empty tokens are dropped."""
    tokens = []
    for piece in _SPLIT_CHARS.split(sentence.lower()):
        piece = _NON_ALNUM.sub("", piece)
        if not piece:
            continue
        tokens.append(_DIGIT_RUN.sub("#", piece))
    return tokens


# one raw sentence with provenance: (patient_id, doc_id, tokens)
RawSentence = tuple  # (str, str, list[str])


def tokenize_documents(documents, mode: str = "word") -> list[RawSentence]:
    """Flatten documents into per-sentence token lists with provenance.

    mode='word' applies the word parser to sentence strings; mode='codes'
    passes pre-tokenized code lists through verbatim (string sentences are
    whitespace-split). Code tokens must not contain whitespace.
    """
    if mode not in ("word", "codes"):
        raise FormatError(f"unknown parser mode {mode!r}")
    out = []
    for doc in documents:
        doc.validate()
        for sent in doc.sentences:
            if mode == "word":
                if not isinstance(sent, str):
                    raise FormatError(
                        f"doc {doc.doc_id!r}: word mode requires sentence strings"
                    )
                tokens = word_tokenize(sent)
            else:
                tokens = sent.split() if isinstance(sent, str) else [str(t) for t in sent]
                for t in tokens:
                    if any(c.isspace() for c in t):
                        raise FormatError(
                            f"doc {doc.doc_id!r}: code token {t!r} contains whitespace"
                        )
            if tokens:
                out.append((doc.patient_id, doc.doc_id, tokens))
    return out


@dataclass
class Vocabulary:
    """Retained token inventory with per-token corpus statistics.

    token ids are dense in [0, len(tokens)) and assigned in lexicographic
    token order. sentence_freq (n_t over unique sentences) and
    n_unique_sentences (N) are filled in by deduplicate().
    """

    tokens: list[str]
    token_to_id: dict[str, int]
    stop_tokens: list[str]
    rare_tokens: list[str]
    total_counts: np.ndarray
    stop_count: int
    rare_min: int
    rare_count_mode: str = "occurrences"
    sentence_freq: np.ndarray = field(default=None)
    n_unique_sentences: int = 0

    def __len__(self):
        return len(self.tokens)


def build_vocabulary(
    raw_sentences,
    stop_count: int = 70,
    rare_min: int = 20,
    rare_count_mode: str = "occurrences",
) -> Vocabulary:
    """Select the retained vocabulary from a tokenized corpus.

    The stop_count most frequent tokens (by number of sentences containing
    them, ties broken lexicographically) are flagged stop. Tokens whose
    count is below rare_min are flagged rare; the count is total raw
    occurrences by default, or containing-sentence count when
    rare_count_mode='sentences'. Both groups are excluded from the
    retained vocabulary.
    """
    if rare_count_mode not in ("occurrences", "sentences"):
        raise FormatError(f"unknown rare_count_mode {rare_count_mode!r}")
    if not raw_sentences:
        raise EmptyCorpusError("no sentences in corpus")

    sent_freq = Counter()
    occ_freq = Counter()
    for _, _, tokens in raw_sentences:
        occ_freq.update(tokens)
        sent_freq.update(set(tokens))

    by_frequency = sorted(sent_freq, key=lambda t: (-sent_freq[t], t))
    stop = set(by_frequency[:stop_count])

    rare_source = occ_freq if rare_count_mode == "occurrences" else sent_freq
    rare = {t for t in sent_freq if t not in stop and rare_source[t] < rare_min}

    retained = sorted(t for t in sent_freq if t not in stop and t not in rare)
    token_to_id = {t: i for i, t in enumerate(retained)}
    return Vocabulary(
        tokens=retained,
        token_to_id=token_to_id,
        stop_tokens=sorted(stop),
        rare_tokens=sorted(rare),
        total_counts=np.array([occ_freq[t] for t in retained], dtype=np.int64),
        stop_count=stop_count,
        rare_min=rare_min,
        rare_count_mode=rare_count_mode,
    )


@dataclass
class TokenizedSentence:
    """A unique sentence: sorted duplicate-free retained token ids plus
    every (patient_id, doc_id) occurrence of the sentence in the corpus."""

    sentence_id: int
    token_ids: np.ndarray
    occurrences: list

    @property
    def n_tokens(self):
        return len(self.token_ids)


def deduplicate(raw_sentences, vocab: Vocabulary) -> list[TokenizedSentence]:
    """Reduce raw sentences to retained-token sets and merge identical sets.

    Sentences that are empty after filtering are dropped. Provenance is
    unioned across merged duplicates. Fills vocab.sentence_freq (n_t over
    unique sentences) and vocab.n_unique_sentences (N).
    """
    token_to_id = vocab.token_to_id
    by_key: dict[tuple, TokenizedSentence] = {}
    order: list[TokenizedSentence] = []
    for patient_id, doc_id, tokens in raw_sentences:
        ids = sorted({token_to_id[t] for t in tokens if t in token_to_id})
        if not ids:
            continue
        key = tuple(ids)
        sent = by_key.get(key)
        if sent is None:
            sent = TokenizedSentence(
                sentence_id=len(order),
                token_ids=np.array(ids, dtype=np.int32),
                occurrences=[],
            )
            by_key[key] = sent
            order.append(sent)
        sent.occurrences.append((patient_id, doc_id))

    freq = np.zeros(len(vocab), dtype=np.int64)
    for sent in order:
        freq[sent.token_ids] += 1
    vocab.sentence_freq = freq
    vocab.n_unique_sentences = len(order)
    return order
