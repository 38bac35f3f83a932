"""Aho-Corasick multi-pattern string matching.

Builds the classic trie with failure links and dictionary-suffix outputs so a
single left-to-right scan reports every occurrence of every pattern, including
overlapping and nested ones.  Matching is exact and case-sensitive; callers
apply their own boundary rules on top of the raw hits.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator


class AhoCorasick:
    """Automaton over a fixed pattern set.

    The goto function is stored as one dict per node, failure links and
    output lists as flat arrays indexed by node id.  Matching runs in
    O(len(text) + hits) after an O(total pattern length) build.
    """

    __slots__ = ("_patterns", "_goto", "_fail", "_out")

    def __init__(self, patterns: Iterable[str]):
        self._patterns: list[str] = list(patterns)
        goto: list[dict[str, int]] = [{}]
        out: list[list[int]] = [[]]
        for idx, pattern in enumerate(self._patterns):
            if not pattern:
                raise ValueError("empty pattern")
            node = 0
            for ch in pattern:
                nxt = goto[node].get(ch)
                if nxt is None:
                    nxt = len(goto)
                    goto.append({})
                    out.append([])
                    goto[node][ch] = nxt
                node = nxt
            out[node].append(idx)

        fail = [0] * len(goto)
        queue: deque[int] = deque(goto[0].values())
        while queue:
            state = queue.popleft()
            for ch, child in goto[state].items():
                queue.append(child)
                f = fail[state]
                while f and ch not in goto[f]:
                    f = fail[f]
                candidate = goto[f].get(ch, 0)
                fail[child] = candidate if candidate != child else 0
                out[child].extend(out[fail[child]])

        self._goto = goto
        self._fail = fail
        self._out = out

    def __len__(self) -> int:
        return len(self._patterns)

    @property
    def patterns(self) -> list[str]:
        return list(self._patterns)

    def find_all(self, text: str) -> Iterator[tuple[int, int, int]]:
        """Yield (start, end, pattern_index) for every occurrence in text."""
        goto = self._goto
        fail = self._fail
        out = self._out
        patterns = self._patterns
        node = 0
        for i, ch in enumerate(text):
            while node and ch not in goto[node]:
                node = fail[node]
            node = goto[node].get(ch, 0)
            if out[node]:
                end = i + 1
                for idx in out[node]:
                    yield end - len(patterns[idx]), end, idx
