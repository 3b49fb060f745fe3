"""Pure-Python T-decomposition kernel.

Fallback for :mod:`fskey._tdecomp`; identical semantics, roughly two orders
of magnitude slower on long inputs.  See :mod:`fskey.tcomplexity` for the
algorithm description and backend selection.
"""

from __future__ import annotations

MAX_INPUT = 2_000_000


def decompose_counts(data: bytes) -> list[int]:
    """Expansion counts k_1..k_m of the T-decomposition of ``data``.

    The input is parsed as a sequence of tokens, initially its bytes.  Each
    round identifies the token ``p`` preceding the final token, counts its
    maximal run length ``k`` there, and regroups every maximal run of ``p``
    the way the corresponding code augmentation prescribes: full blocks of
    ``k+1`` copies become one token, shorter remainders merge with their
    following token, and the trailing run absorbs the final token.  Rounds
    repeat until one token spans the whole input; the recorded ``k`` values
    are the expansion counts.
    """
    n = len(data)
    if n == 0:
        raise ValueError("cannot decompose an empty string")
    if n > MAX_INPUT:
        raise ValueError(f"input longer than {MAX_INPUT} bytes")
    tokens = list(data)
    next_id = 256
    counts: list[int] = []

    while len(tokens) > 1:
        m = len(tokens)
        p = tokens[m - 2]
        j = m - 3
        while j >= 0 and tokens[j] == p:
            j -= 1
        k = m - 2 - j
        counts.append(k)
        kp1 = k + 1

        # Tokens sharing a construction recipe (run length, follower) within
        # this round must map to the same id; -2 marks the pure-power block.
        recipes: dict[tuple[int, int], int] = {}
        out: list[int] = []
        i = 0
        while i <= j:
            tok = tokens[i]
            if tok != p:
                out.append(tok)
                i += 1
                continue
            r = 1
            i += 1
            while tokens[i] == p:  # region ends with a non-p token
                r += 1
                i += 1
            while r >= kp1:
                tid = recipes.get((kp1, -2))
                if tid is None:
                    tid = next_id
                    next_id += 1
                    recipes[(kp1, -2)] = tid
                out.append(tid)
                r -= kp1
            if r:
                key = (r, tokens[i])
                i += 1
                tid = recipes.get(key)
                if tid is None:
                    tid = next_id
                    next_id += 1
                    recipes[key] = tid
                out.append(tid)

        last = tokens[m - 1]
        key = (kp1, -2) if last == p else (k, last)
        tid = recipes.get(key)
        if tid is None:
            tid = next_id
            next_id += 1
            recipes[key] = tid
        out.append(tid)
        tokens = out

    return counts
