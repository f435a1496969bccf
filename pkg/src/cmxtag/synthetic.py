"""Deterministic synthetic code-mixed corpora for tests and demos.

Every word belongs to exactly one lexical class and the POS label is a
function of that class, so a tagger can learn the labels perfectly.
"""
from __future__ import annotations

import random

from .corpus import Corpus, LanguageTag, Token, Utterance

LANGPAIRS = ("hi", "bn", "te")

VOCAB = {
    "en": {
        "NOUN": "movie phone friend party college exam game song food weekend office bus match city video".split(),
        "VERB": "watch go like love call play eat see need want come know".split(),
        "ADJ": "good bad awesome cool happy boring nice funny late big".split(),
        "PRON": "i you we he she they it this".split(),
        "ADP": "in on at for with from to about".split(),
        "PRT": "not just very really also only".split(),
    },
    "hi": {
        "NOUN": "ghar paani kaam dost khana din raat baat log duniya pyaar shaadi gaana paisa".split(),
        "VERB": "karna jaana dekho khelo bolo aana socho chalo milna rehna".split(),
        "ADJ": "accha bura bada chhota naya purana sundar mast".split(),
        "PRON": "main tum hum woh yeh aap mera tera".split(),
        "ADP": "mein par se ke ko tak".split(),
        "PRT": "nahi bhi hi toh na bas".split(),
    },
    "bn": {
        "NOUN": "bari jol kaj bondhu khabar dinta raater kotha lok gaan taka boi".split(),
        "VERB": "korchi jachhi dekhchi khelchi bolchi ashchi bhabchi khachhi thakchi ghumachhi".split(),
        "ADJ": "bhalo kharap boro chhoto notun puron sundor darun".split(),
        "PRON": "ami tumi amra se eta apni amar tomar".split(),
        "ADP": "theke diye jonno kache moddhe porjonto".split(),
        "PRT": "naa tai ki je kintu shudhu".split(),
    },
    "te": {
        "NOUN": "illu neellu pani snehithudu tindi roju raatri maata prajalu paata dabbu pustakam".split(),
        "VERB": "cheyyi vellu chudu aadu cheppu raa aalochinchu nadu tinu undu".split(),
        "ADJ": "manchi chedda pedda chinna kotha andamaina adbhutam".split(),
        "PRON": "nenu nuvvu memu atanu idi meeru naa nee".split(),
        "ADP": "lo meeda nundi kosam tho varaku".split(),
        "PRT": "kaadu kuda ey ani maatrame inka".split(),
    },
}

PUNCT = [".", ",", "!", "?", "..."]
SOCIAL = [":)", ":D", "<3", "@ravi", "@priya", "#cricket", "#fun"]
ACRONYMS = ["lol", "rofl", "omg"]
NAMED = ["Kolkata", "Hyderabad", "Delhi", "Mumbai", "Sachin"]

TEMPLATES = [
    ["PRON", "NOUN", "VERB"],
    ["PRON", "ADJ", "NOUN", "VERB"],
    ["NOUN", "ADP", "NOUN", "VERB"],
    ["PRON", "PRT", "VERB"],
    ["ADJ", "NOUN", "PRT", "VERB"],
    ["PRON", "NOUN", "ADP", "NOUN", "VERB", "PRT"],
]


def _clause(rng: random.Random, base: str, other: str, mixing: float) -> list[Token]:
    toks = []
    for cls in rng.choice(TEMPLATES):
        r = rng.random()
        if cls == "NOUN" and r < 0.05:
            toks.append(Token(rng.choice(NAMED), LanguageTag.NE, "NOUN"))
            continue
        if cls == "VERB" and r < 0.03:
            root = rng.choice(VOCAB[base if base != "en" else other]["NOUN"])
            toks.append(Token(root + "ing", LanguageTag.MIXED, "VERB"))
            continue
        lang = other if rng.random() < mixing else base
        toks.append(Token(rng.choice(VOCAB[lang][cls]), LanguageTag(lang), cls))
    return toks


def generate_synthetic_corpus(
    seed: int, num_utterances: int, langpair: str = "hi", mixing: float = 0.3
) -> Corpus:
    """Generate ``num_utterances`` utterances of ``langpair``-English text.

    Each utterance picks a matrix language (the Indic one or English with equal
    odds); each language-bearing token is then drawn from the other language
    with probability ``mixing``.
    """
    if num_utterances < 1:
        raise ValueError("num_utterances must be >= 1")
    if langpair not in LANGPAIRS:
        raise ValueError(f"langpair must be one of {LANGPAIRS}, got {langpair!r}")
    if not 0.0 <= mixing <= 1.0:
        raise ValueError("mixing must be in [0, 1]")
    rng = random.Random(seed)
    utterances = []
    for i in range(num_utterances):
        base, other = (langpair, "en") if rng.random() < 0.5 else ("en", langpair)
        toks = []
        if rng.random() < 0.1:
            toks.append(Token(rng.choice(SOCIAL), LanguageTag.UNIV, "X"))
        toks += _clause(rng, base, other, mixing)
        if rng.random() < 0.3:
            toks.append(Token(",", LanguageTag.UNIV, "PUNCT"))
            toks += _clause(rng, base, other, mixing)
        if rng.random() < 0.1:
            toks.append(Token(rng.choice(ACRONYMS), LanguageTag.ACRO, "X"))
        if rng.random() < 0.6:
            toks.append(Token(rng.choice(PUNCT), LanguageTag.UNIV, "PUNCT"))
        meta = {"id": f"{langpair}-en-{i + 1}", "langpair": f"{langpair}-en", "platform": "synthetic"}
        utterances.append(Utterance(toks, meta))
    return Corpus(utterances, {"generator": "synthetic", "seed": str(seed)})
