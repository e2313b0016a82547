"""Suffix-stripping stemmer (Porter's 1980 rule set, steps 1a-5b).

Implements the originally published rules without the later revisions
(no length guard for short words, ABLI -> ABLE rather than BLI -> BLE,
no LOGI rule, plain (*v*) Y -> I in step 1c). Within a step the first
matching suffix wins; if its condition fails, the step changes nothing.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y is a consonant at the start or after a vowel, else a vowel
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """m in the [C](VC)^m[V] decomposition: vowel-to-consonant crossings."""
    m = 0
    prev_cons = None
    for i in range(len(stem)):
        cons = _is_consonant(stem, i)
        if prev_cons is False and cons:
            m += 1
        prev_cons = cons
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (len(word) >= 2 and word[-1] == word[-2]
            and _is_consonant(word, len(word) - 1))


def _ends_cvc(word: str) -> bool:
    # the final consonant must not be w, x or y
    return (len(word) >= 3
            and _is_consonant(word, len(word) - 3)
            and not _is_consonant(word, len(word) - 2)
            and _is_consonant(word, len(word) - 1)
            and word[-1] not in "wxy")


def _first_match(word, rules):
    """Apply the first rule whose suffix matches the word.

    A matched suffix whose condition fails still ends the step, so a
    shorter suffix later in the list cannot fire.
    """
    for suffix, replacement, condition in rules:
        if word.endswith(suffix):
            stem = word[:len(word) - len(suffix)]
            if condition is None or condition(stem):
                return stem + replacement
            return word
    return word


def _m_gt_0(stem: str) -> bool:
    return _measure(stem) > 0


def _m_gt_1(stem: str) -> bool:
    return _measure(stem) > 1


def _step1a(word):
    return _first_match(word, [
        ("sses", "ss", None),
        ("ies", "i", None),
        ("ss", "ss", None),
        ("s", "", None),
    ])


def _step1b(word):
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if _measure(stem) > 0 else word
    for suffix in ("ed", "ing"):
        if not word.endswith(suffix):
            continue
        stem = word[:len(word) - len(suffix)]
        if not _has_vowel(stem):
            return word
        # cleanup after a successful ED/ING removal
        if stem.endswith(("at", "bl", "iz")):
            return stem + "e"
        if _ends_double_consonant(stem):
            return stem if stem[-1] in "lsz" else stem[:-1]
        if _measure(stem) == 1 and _ends_cvc(stem):
            return stem + "e"
        return stem
    return word


def _step1c(word):
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_STEP2 = (
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"),
    ("anci", "ance"), ("izer", "ize"), ("abli", "able"), ("alli", "al"),
    ("entli", "ent"), ("eli", "e"), ("ousli", "ous"), ("ization", "ize"),
    ("ation", "ate"), ("ator", "ate"), ("alism", "al"), ("iveness", "ive"),
    ("fulness", "ful"), ("ousness", "ous"), ("aliti", "al"),
    ("iviti", "ive"), ("biliti", "ble"),
)

_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)

_STEP4 = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def _step2(word):
    return _first_match(word, [(s, r, _m_gt_0) for s, r in _STEP2])


def _step3(word):
    return _first_match(word, [(s, r, _m_gt_0) for s, r in _STEP3])


def _ion_condition(stem):
    # (m>1 and (*S or *T)) ION ->
    return _measure(stem) > 1 and stem[-1:] in ("s", "t")


def _step4(word):
    rules = [(s, "", _ion_condition if s == "ion" else _m_gt_1)
             for s in _STEP4]
    return _first_match(word, rules)


def _step5a(word):
    # unlike the other steps, both E rules are considered
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word):
    if word.endswith("ll") and _measure(word[:-1]) > 1:
        return word[:-1]
    return word


_STEPS = (_step1a, _step1b, _step1c, _step2, _step3, _step4,
          _step5a, _step5b)


def stem(word: str) -> str:
    """Stem one token. Input is lowercased; output is its root form."""
    word = word.lower()
    for step in _STEPS:
        word = step(word)
    return word
