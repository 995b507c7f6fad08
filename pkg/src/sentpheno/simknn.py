"""Weighted Jaccard similarity and exact top-k nearest-neighbor search.

Similarity between two token sets A, B is

    phi(A, B) = sum_{t in A&B} w(t) / sum_{t in A|B} w(t)

under one of three token weightings: basic (w=1), isf (w=N/n_t) or
logisf (w=ln(N/n_t)), where N is the number of unique sentences and n_t
the number of unique sentences containing t. Search is exact: an
inverted index generates the candidate set (every sentence sharing at
least one positive-weight token with the query), each candidate is
scored, and the top k by (similarity desc, sentence_id asc) are kept.

All weight sums are accumulated in ascending token-id order so results
are bit-reproducible and directly comparable against a brute-force
oracle using the same convention.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, UnknownSentenceError

SCHEMES = ("basic", "isf", "logisf")


def compute_weights(vocab, scheme: str) -> np.ndarray:
    """Per-token weights w(t) for the given scheme, indexed by token id."""
    if scheme not in SCHEMES:
        raise FormatError(f"unknown weight scheme {scheme!r}")
    if scheme == "basic":
        return np.ones(len(vocab), dtype=np.float64)
    n_t = np.asarray(vocab.sentence_freq, dtype=np.float64)
    if vocab.n_unique_sentences <= 0 or np.any(n_t <= 0):
        raise FormatError("vocabulary statistics not finalized (run deduplicate)")
    ratio = float(vocab.n_unique_sentences) / n_t
    return ratio if scheme == "isf" else np.log(ratio)


def weighted_size(token_ids, weights) -> float:
    """|A|_w summed sequentially in ascending token-id order."""
    total = 0.0
    for t in sorted(int(t) for t in token_ids):
        total += float(weights[t])
    return total


def weighted_jaccard(a_ids, b_ids, weights) -> float:
    """phi(A, B); 0.0 when the union has zero total weight."""
    a = sorted(int(t) for t in set(a_ids))
    b = sorted(int(t) for t in set(b_ids))
    inter = 0.0
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            inter += float(weights[a[i]])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    size_a = weighted_size(a, weights)
    size_b = weighted_size(b, weights)
    union = size_a + size_b - inter
    if union <= 0.0:
        return 0.0
    return inter / union


@dataclass
class NeighborList:
    """Up to k neighbors of one query, sorted by similarity desc then id asc."""

    query_id: int
    neighbor_ids: np.ndarray
    similarities: np.ndarray

    def __len__(self):
        return len(self.neighbor_ids)

    def pairs(self):
        return list(zip(self.neighbor_ids.tolist(), self.similarities.tolist()))


class InvertedIndex:
    """Write-once token -> sentence-id postings with precomputed weights.

    Postings are ascending sentence-id arrays. Weighted sentence sizes are
    accumulated token-by-token in ascending id order (see module note).
    """

    def __init__(self, sentences, vocab, scheme: str):
        self.scheme = scheme
        self.n_sentences = len(sentences)
        self.weights = compute_weights(vocab, scheme)
        self.token_ids = [np.asarray(s.token_ids, dtype=np.int64) for s in sentences]

        n_tokens = len(vocab)
        lengths = np.array([len(t) for t in self.token_ids], dtype=np.int64)
        if lengths.sum() == 0:
            flat_tokens = np.zeros(0, dtype=np.int64)
            flat_sids = np.zeros(0, dtype=np.int64)
        else:
            flat_tokens = np.concatenate(self.token_ids)
            flat_sids = np.repeat(np.arange(self.n_sentences, dtype=np.int64), lengths)
        order = np.argsort(flat_tokens, kind="stable")
        sorted_tokens = flat_tokens[order]
        sorted_sids = flat_sids[order]
        bounds = np.searchsorted(sorted_tokens, np.arange(n_tokens + 1))
        self.postings = [
            sorted_sids[bounds[t] : bounds[t + 1]] for t in range(n_tokens)
        ]

        sizes = np.zeros(self.n_sentences, dtype=np.float64)
        for t in range(n_tokens):
            p = self.postings[t]
            if len(p):
                sizes[p] += self.weights[t]
        self.sizes = sizes

    def posting(self, token_id: int) -> np.ndarray:
        return self.postings[token_id]


def build_index(sentences, vocab, scheme: str = "logisf") -> InvertedIndex:
    return InvertedIndex(sentences, vocab, scheme)


def _score_query(index: InvertedIndex, query_id: int, k: int, acc: np.ndarray) -> NeighborList:
    weights = index.weights
    touched = []
    for t in index.token_ids[query_id].tolist():
        w = weights[t]
        if w <= 0.0:
            continue
        p = index.postings[t]
        acc[p] += w
        touched.append(p)

    empty = NeighborList(
        query_id, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64)
    )
    if not touched:
        return empty
    cand = np.unique(np.concatenate(touched))
    inter = acc[cand].copy()
    acc[cand] = 0.0

    keep = cand != query_id
    cand = cand[keep]
    inter = inter[keep]
    if len(cand) == 0:
        return empty

    sims = inter / (index.sizes[cand] + index.sizes[query_id] - inter)
    if len(cand) > k:
        kth = np.partition(sims, len(sims) - k)[len(sims) - k]
        keep = sims >= kth
        cand = cand[keep]
        sims = sims[keep]
    order = np.lexsort((cand, -sims))[:k]
    return NeighborList(query_id, cand[order], sims[order])


def knn_search(index: InvertedIndex, query_id: int, k: int) -> NeighborList:
    """Exact top-k neighbors of one indexed sentence."""
    if not 0 <= query_id < index.n_sentences:
        raise UnknownSentenceError(f"sentence id {query_id} not indexed")
    acc = np.zeros(index.n_sentences, dtype=np.float64)
    return _score_query(index, query_id, k, acc)


def knn_all(index: InvertedIndex, k: int, jobs: int = 1) -> list[NeighborList]:
    """Top-k neighbors for every indexed sentence.

    Queries are independent; jobs > 1 shards them over a thread pool.
    Output is assembled by query id and is identical for any job count.
    """
    n = index.n_sentences
    results: list = [None] * n
    if jobs <= 1:
        acc = np.zeros(n, dtype=np.float64)
        for q in range(n):
            results[q] = _score_query(index, q, k, acc)
        return results

    shards = np.array_split(np.arange(n), jobs)

    def run_shard(ids):
        acc = np.zeros(n, dtype=np.float64)
        for q in ids.tolist():
            results[q] = _score_query(index, q, k, acc)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        list(pool.map(run_shard, shards))
    return results
