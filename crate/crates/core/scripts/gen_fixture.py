#!/usr/bin/env python3
"""Regenerates the bundled fixture under data/fixture/.

Output is fully determined by SEED. Planted defects:
duplicated ids, empty texts, malformed datetimes, off-tag and
out-of-window rows.
"""

import csv
import json
import random
from datetime import datetime, timedelta
from pathlib import Path

SEED = 20201030
OUT = Path(__file__).resolve().parent.parent / "data" / "fixture"

QUERY_TAGS = ["izmirdeprem", "izmirdepremi", "IZMIRDEPREM", "depremizmir", "İzmirDepreminde",
              "egedepremi", "bayraklı", "EnkazIhbarIzmir", "gecmisolsunizmir", "enkaz"]
TEXT_TAGS = [("#deprem", 0.6), ("#izmirdeprem", 0.3), ("#İzmirDepremi", 0.2), ("#enkaz", 0.1),
             ("#SesVerTürkiye", 0.05)]
MENTIONS = [("@AFADBaskanlik", 0.2), ("@izmirbld", 0.15), ("@RTErdogan", 0.1), ("@KizilayTR", 0.05)]
OPENERS = [
    ("Geçmiş olsun İzmir", 5),
    ("Geçmiş olsun Türkiye", 2),
    ("Allah korusun", 1),
    ("İzmir'de deprem", 2),
    ("Bayraklı'da enkaz altında", 1),
    ("Yardım bekleyen var", 1),
    ("Ekipler bölgede", 1),
]
WORDS = {
    "negative": ["korku", "panik", "yıkım", "acı", "kayıp", "yaralı", "endişe", "felaket", "çaresiz", "korkunç"],
    "neutral": ["açıklama", "bilgi", "bölge", "saat", "büyüklük", "merkez", "rapor", "ekip", "duyuru", "koordinasyon"],
    "positive": ["umut", "kurtarıldı", "dayanışma", "teşekkür", "mucize", "sevindirici", "başarı", "güzel", "helal", "kahraman"],
}
SHARED = ["izmir", "deprem", "bugün", "herkes", "şehir", "insanlar", "sokak"]
EMOJI = ["🙏", "💔", "😢", "❤️"]
MALFORMED_DATES = ["30/10/2020 14:51", "", "2020-13-01 00:00:00", "yesterday",
                   "2020-10-30T25:00:00", "2020-02-30 10:00:00"]


def weighted(rng, pairs):
    items, weights = zip(*pairs)
    return rng.choices(items, weights=weights)[0]


def timestamp(rng):
    """Local time; two thirds in October, bursty after 14:51 on the 30th."""
    if rng.random() < 0.67:
        start = datetime(2020, 10, 30, 14, 51)
        t = start + timedelta(minutes=rng.randrange(0, 33 * 60))
    else:
        day = rng.choice([1, 1, 2, 2, 3, 4, 5, 7, 9, 12, 15, 20, 23])
        t = datetime(2020, 11, day, rng.choice([9, 11, 12, 12, 13, 13, 18, 21]), rng.randrange(60), rng.randrange(60))
    return t


def render_datetime(rng, t):
    r = rng.random()
    if r < 0.8:
        return t.strftime("%Y-%m-%d %H:%M:%S")
    if r < 0.9:
        return (t - timedelta(hours=3)).strftime("%Y-%m-%dT%H:%M:%SZ")
    return t.strftime("%Y-%m-%dT%H:%M:%S+03:00")


def tweet_text(rng, label):
    parts = [weighted(rng, OPENERS)]
    parts += rng.sample(WORDS[label], rng.randint(1, 3))
    if rng.random() < 0.3:
        parts.append(rng.choice(SHARED))
    for tag, p in TEXT_TAGS:
        if rng.random() < p:
            parts.append(tag)
    for m, p in MENTIONS:
        if rng.random() < p:
            parts.insert(rng.randrange(len(parts) + 1), m)
    r = rng.random()
    links = 0 if r < 0.51 else 1 if r < 0.96 else 2
    for _ in range(links):
        parts.append("https://t.co/" + "".join(rng.choices("abcdefghijkmnpqrstuvwxyzABCDEFGH23456789", k=10)))
    if rng.random() < 0.2:
        parts.append(rng.choice(EMOJI))
    text = " ".join(parts)
    if rng.random() < 0.3:
        text += "!"
    return text


def tweets(rng):
    users = [f"user{i:02d}" for i in range(40)]
    user_weights = [1.0 / (i + 1) for i in range(40)]
    next_id = 1322180000000000000
    rows = []
    kinds = ["normal"] * 170 + ["duplicate"] * 10 + ["empty"] * 8 + ["baddate"] * 6 + ["offtag"] * 2 + ["window"] * 4
    rng.shuffle(kinds)
    # duplicates need an earlier original
    while kinds[0] == "duplicate":
        rng.shuffle(kinds)
    bad_dates = list(MALFORMED_DATES)
    window_dates = ["2020-10-29 23:00:00", "2020-11-24 10:00:00", "2020-10-30T20:59:59Z", "2020-11-23T21:00:00Z"]
    originals = []
    for kind in kinds:
        next_id += rng.randrange(1000, 5_000_000)
        label = rng.choice(list(WORDS))
        user = rng.choices(users, weights=user_weights)[0]
        if rng.random() < 0.05:
            user = "@" + user
        row = {
            "hashtag": rng.choice(QUERY_TAGS),
            "datetime": render_datetime(rng, timestamp(rng)),
            "tweet_id": str(next_id),
            "text": tweet_text(rng, label),
            "username": user,
        }
        if kind == "duplicate":
            src = rng.choice(originals)
            row = dict(src)
            if rng.random() < 0.5:
                row["text"] = tweet_text(rng, label)
        elif kind == "empty":
            row["text"] = rng.choice(["", "   "])
        elif kind == "baddate":
            row["datetime"] = bad_dates.pop()
        elif kind == "offtag":
            row["hashtag"] = "covid19"
        elif kind == "window":
            row["datetime"] = window_dates.pop()
        if kind == "normal":
            originals.append(row)
        rows.append(row)
    return rows


def labeled(rng):
    out = []
    for label in WORDS:
        for _ in range(200):
            words = rng.sample(WORDS[label], rng.randint(2, 4))
            words += rng.sample(SHARED, rng.randint(1, 3))
            if rng.random() < 0.1:
                other = rng.choice([c for c in WORDS if c != label])
                words.append(rng.choice(WORDS[other]))
            rng.shuffle(words)
            out.append({"text": " ".join(words), "label": label})
    rng.shuffle(out)
    return out


def scores(rng, rows):
    seen = set()
    out = []
    for r in rows:
        if r["tweet_id"] in seen:
            continue
        seen.add(r["tweet_id"])
        a = [rng.random() + 0.01 for _ in range(3)]
        s = sum(a)
        neg, neu, pos = (round(x / s, 6) for x in a)
        pos = round(1.0 - neg - neu, 6)
        out.append({"tweet_id": r["tweet_id"], "negative": neg, "neutral": neu, "positive": pos})
    out.append({"tweet_id": "1", "negative": 0.5, "neutral": 0.5, "positive": 0.5})
    return out


def main():
    rng = random.Random(SEED)
    rows = tweets(rng)
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "tweets.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=["hashtag", "datetime", "tweet_id", "text", "username"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    with open(OUT / "labeled.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=["text", "label"], lineterminator="\n")
        w.writeheader()
        w.writerows(labeled(rng))
    with open(OUT / "scores.jsonl", "w", encoding="utf-8") as f:
        for s in scores(rng, rows):
            f.write(json.dumps(s, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
