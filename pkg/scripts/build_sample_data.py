#!/usr/bin/env python3
"""Build the bundled sample data: code-mixed sentiment corpus, perturbation
dictionaries, and the language lexicon (word lists + trigram tables).

Everything is generated from a fixed seed so the shipped files are
reproducible; rerun after editing the vocabulary or templates.
"""

from __future__ import annotations

import collections
import math
import random
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "codemix_adv" / "data"
SEED = 20250810

# ---------------------------------------------------------------- dictionaries

PHONETIC_L1 = {
    "bha": ["va"],
    "bh": ["v"],
    "v": ["bh"],
    "ja": ["z"],
    "j": ["z"],
    "kh": ["k"],
    "k": ["kh"],
    "ph": ["f"],
    "f": ["ph"],
    "sh": ["s"],
    "s": ["sh"],
    "ch": ["chh"],
    "th": ["t"],
    "ee": ["i"],
    "i": ["ee"],
    "oo": ["u"],
    "u": ["oo"],
    "z": ["j"],
}

PHONETIC_L2 = {
    "ph": ["f"],
    "f": ["ph"],
    "oo": ["u"],
    "u": ["oo"],
    "ee": ["i"],
    "i": ["ee"],
    "s": ["z"],
    "z": ["s"],
    "ck": ["k"],
    "c": ["k"],
    "th": ["d"],
    "wh": ["w"],
    "ou": ["ow"],
    "au": ["aw"],
}

# no 'a'/'m'/'f'/'p' here: the first eligible character of a token decides
# the deterministic repetition, and vowels like i/o are the ones people
# actually stretch (mafi -> mafii, paoa -> paooa)
REPEAT_L1 = {"e": 2, "i": 2, "o": 2, "u": 2, "l": 1, "s": 1, "z": 1, "r": 1, "y": 1, "w": 1, "h": 1}
REPEAT_L2 = {"e": 2, "i": 2, "o": 2, "u": 2, "l": 1, "s": 1, "z": 1, "r": 1, "y": 1, "w": 1}

TRANSLIT_L1 = {
    "bhalo": "good",
    "kharap": "bad",
    "darun": "awesome",
    "osadharon": "extraordinary",
    "sundor": "beautiful",
    "moja": "fun",
    "jos": "awesome",
    "baje": "bad",
    "bekar": "useless",
    "faltu": "useless",
    "bisri": "ugly",
    "khub": "very",
    "ekdom": "totally",
    "aj": "today",
    "ajke": "today",
    "kal": "tomorrow",
    "khabar": "food",
    "gaan": "song",
    "chobi": "movie",
    "boi": "book",
    "khela": "game",
    "natok": "drama",
    "dokan": "shop",
    "rasta": "road",
    "vai": "bro",
    "tumi": "you",
    "ami": "i",
    "amra": "we",
    "somoy": "time",
    "kotha": "talk",
    "notun": "new",
    "ei": "this",
    "eita": "this",
    "na": "no",
    "ki": "what",
    "jao": "go",
    "jabo": "going",
    "dekho": "look",
    "dekhlam": "watched",
    "dekhte": "watch",
    "bollam": "said",
    "shunlam": "heard",
    "gelam": "went",
    "khelam": "played",
    "ache": "is",
    "legeche": "felt",
    "hoyeche": "happened",
    "chilo": "was",
    "holo": "became",
    "asbe": "coming",
    "abar": "again",
    "onek": "many",
    "ektu": "little",
    "ekta": "one",
    "pore": "later",
    "niye": "about",
    "theke": "from",
    "sathe": "with",
    "jonno": "for",
    "amar": "my",
    "kache": "near",
    "bacha": "baby",
    "byaah": "wedding",
    "khushi": "happy",
    "golpo": "story",
    "khobor": "news",
    "suru": "start",
    "dol": "team",
    "porbo": "episode",
}

TRANSLIT_L2 = {
    "good": "bhalo",
    "bad": "kharap",
    "very": "khub",
    "today": "aj",
    "tomorrow": "kal",
    "movie": "chobi",
    "song": "gaan",
    "food": "khabar",
    "game": "khela",
    "book": "boi",
    "road": "rasta",
    "bro": "vai",
    "awesome": "darun",
    "amazing": "osadharon",
    "great": "darun",
    "lovely": "sundor",
    "perfect": "osadharon",
    "terrible": "kharap",
    "horrible": "bisri",
    "boring": "faltu",
    "useless": "bekar",
    "awful": "baje",
    "happy": "khushi",
    "time": "somoy",
    "new": "notun",
    "no": "na",
    "this": "eita",
    "what": "ki",
    "you": "tumi",
    "go": "jao",
    "fun": "moja",
    "beautiful": "sundor",
    "totally": "ekdom",
    "again": "abar",
    "many": "onek",
    "was": "chilo",
    "is": "ache",
    "really": "khub",
    "so": "tai",
    "watch": "dekho",
    "story": "golpo",
    "news": "khobor",
    "update": "khobor",
    "starts": "suru",
    "match": "khela",
    "team": "dol",
    "episode": "porbo",
    "series": "natok",
}

# ---------------------------------------------------------------- vocabulary

TOPICS_L1 = ["chobi", "gaan", "khabar", "khela", "boi", "natok", "dokan", "rasta"]
TOPICS_L2 = ["movie", "song", "match", "phone", "game", "story", "episode", "restaurant", "series", "trailer"]
POS_L1 = ["bhalo", "darun", "osadharon", "sundor", "moja", "jos"]
NEG_L1 = ["kharap", "baje", "bekar", "faltu", "bisri"]
POS_L2 = ["awesome", "amazing", "great", "lovely", "perfect"]
NEG_L2 = ["terrible", "horrible", "boring", "useless", "awful"]

L1_EXTRA = [
    "ei", "ta", "ekdom", "khub", "onek", "aj", "ajke", "kal", "vai", "ami", "tumi", "amra",
    "abar", "ektu", "ekta", "eita", "hobe", "na", "ki", "er", "amar", "kache", "tai",
    "chilo", "holo", "legeche", "dekhlam", "shunlam", "khelam", "hoyeche", "bollam",
    "jabo", "gelam", "ache", "dekho", "dekhte", "asbe", "jao", "tmio", "somoy", "kotha",
    "notun", "jonno", "sathe", "theke", "niye", "pore", "khushi", "golpo", "khobor",
    "suru", "dol", "porbo", "bacha", "byaah", "gajab", "mafi", "paoa", "bhalobasha",
    "sudhu", "vipode",
]
L2_EXTRA = [
    "the", "was", "is", "really", "very", "so", "totally", "today", "guys", "bro",
    "just", "plz", "new", "update", "plan", "time", "normal", "regular", "watch",
    "news", "review", "team", "starts", "good", "bad", "love", "hate", "ok", "okay",
    "pick", "up", "da", "cal", "call", "dumb",
]

PUNCT = ["!", "...", "?"]
LEADINS = ["vai", "guys", "bro"]

# ------------------------------------------------------------------ templates

# T = topic slot, S = sentiment slot; pos and neg share these so the class
# signal concentrates on the sentiment word
SENTIMENT_TEMPLATES = [
    ["ei", "T", "ta", "ekdom", "S", "chilo"],
    ["aj", "er", "T", "khub", "S", "legeche"],
    ["T", "ta", "S", "hoyeche", "vai"],
    ["the", "T", "was", "really", "S", "bro"],
    ["ki", "S", "ekta", "T", "dekhlam", "aj"],
    ["amar", "kache", "T", "ta", "S", "legeche"],
    ["T", "er", "golpo", "ta", "S", "chilo"],
    ["totally", "S", "T", "ajke", "dekhlam"],
]

NEUTRAL_TEMPLATES = [
    ["aj", "T", "ta", "dekhlam", "ami"],
    ["kal", "T", "er", "somoy", "ache"],
    ["amra", "T", "niye", "kotha", "bollam"],
    ["ei", "T", "ta", "notun", "hoyeche"],
    ["the", "T", "starts", "kal", "abar"],
    ["T", "er", "update", "asbe", "pore"],
    ["ami", "kal", "T", "dekhte", "jabo"],
    ["tumi", "ki", "T", "ta", "dekho", "aj"],
]

CLASSES = ["positive", "negative", "neutral"]


def make_sentence(rng: random.Random, cls: str) -> str:
    topic = rng.choice(TOPICS_L1 if rng.random() < 0.5 else TOPICS_L2)
    if cls == "neutral":
        template = rng.choice(NEUTRAL_TEMPLATES)
        sentiment = None
    else:
        template = rng.choice(SENTIMENT_TEMPLATES)
        if cls == "positive":
            sentiment = rng.choice(POS_L1 if rng.random() < 0.7 else POS_L2)
        else:
            sentiment = rng.choice(NEG_L1 if rng.random() < 0.7 else NEG_L2)
    tokens = [topic if slot == "T" else sentiment if slot == "S" else slot for slot in template]
    if rng.random() < 0.3:
        tokens.insert(0, rng.choice(LEADINS))
    if rng.random() < 0.25:
        tokens.append(rng.choice(PUNCT))
    return " ".join(tokens)


def build_corpus(rng: random.Random, prefix: str, per_class: int) -> list[tuple[str, str, str]]:
    rows = []
    counter = 1
    for cls in CLASSES:
        for _ in range(per_class):
            rows.append((f"{prefix}-{counter:04d}", make_sentence(rng, cls), cls))
            counter += 1
    rng.shuffle(rows)
    return rows


def write_corpus(rows, path: Path) -> None:
    lines = [f"id\ttext\tlabel({','.join(CLASSES)})"]
    lines += [f"{rid}\t{text}\t{cls}" for rid, text, cls in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_dicts(dicts_dir: Path) -> None:
    def dump_phonetic(table, path):
        path.write_text(
            "".join(f"{key}\t{','.join(reps)}\n" for key, reps in sorted(table.items())),
            encoding="utf-8",
        )

    def dump_repeat(table, path):
        path.write_text("".join(f"{ch}\t{cap}\n" for ch, cap in sorted(table.items())), encoding="utf-8")

    dump_phonetic(PHONETIC_L1, dicts_dir / "phonetic.l1.tsv")
    dump_phonetic(PHONETIC_L2, dicts_dir / "phonetic.l2.tsv")
    dump_repeat(REPEAT_L1, dicts_dir / "repeat.l1.tsv")
    dump_repeat(REPEAT_L2, dicts_dir / "repeat.l2.tsv")
    rows = [f"{token}\tl1\t{replacement}" for token, replacement in sorted(TRANSLIT_L1.items())]
    rows += [f"{token}\tl2\t{replacement}" for token, replacement in sorted(TRANSLIT_L2.items())]
    (dicts_dir / "translit.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")


def trigram_counts(words) -> dict[str, int]:
    counts = collections.Counter()
    for word in words:
        for i in range(len(word) - 2):
            counts[word[i : i + 3]] += 1
    return dict(counts)


def write_lexicon(lex_dir: Path, l1_words: list[str], l2_words: list[str]) -> None:
    l1 = sorted(set(l1_words))
    l2 = sorted(set(l2_words))
    (lex_dir / "l1.txt").write_text("\n".join(l1) + "\n", encoding="utf-8")
    (lex_dir / "l2.txt").write_text("\n".join(l2) + "\n", encoding="utf-8")
    for side, words in (("l1", l1), ("l2", l2)):
        counts = trigram_counts(words)
        rows = [f"{gram}\t{math.log10(count):.6f}" for gram, count in sorted(counts.items())]
        (lex_dir / f"{side}.ngrams.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")


def main() -> None:
    rng = random.Random(SEED)
    for sub in ("corpus", "dicts", "lexicon"):
        (DATA_DIR / sub).mkdir(parents=True, exist_ok=True)

    write_corpus(build_corpus(rng, "train", 120), DATA_DIR / "corpus" / "train.tsv")
    write_corpus(build_corpus(rng, "test", 40), DATA_DIR / "corpus" / "test.tsv")
    write_dicts(DATA_DIR / "dicts")

    l1_words = TOPICS_L1 + POS_L1 + NEG_L1 + L1_EXTRA
    l2_words = TOPICS_L2 + POS_L2 + NEG_L2 + L2_EXTRA
    write_lexicon(DATA_DIR / "lexicon", l1_words, l2_words)
    print(f"sample data written under {DATA_DIR}")


if __name__ == "__main__":
    main()
