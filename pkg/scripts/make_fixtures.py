#!/usr/bin/env python3
"""Regenerate the committed fixture datasets under fixtures/.

These are small synthetic stand-ins with the same schemas the fetch
script produces, so the offline test suite can exercise every pipeline
stage. They are NOT subsets of the real datasets; full-dataset numbers
require scripts/fetch_datasets.py.
"""

import csv
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

COMPASS = ["N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE",
           "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW"]

FILLER = ("the this is i so it that was my for you and a to of in really very "
          "just like one new who here after still me now watching video great"
          ).split()
SPAM_WORDS = "win winner prize cash iphone click buy cheap offer deal gift promo".split()
HAM_WORDS = ("music beat classic childhood memories voice lyrics amazing "
             "beautiful chills").split()
SPAM_PHRASES = ["check out", "check", "subscribe", "my channel", "please",
                "http", "free", "follow"]
HAM_PHRASES = ["song", "love", "awesome", "best"]
# verbatim copy-paste comments, the hallmark of comment spam
SPAM_CLONES = [
    "please check out my channel",
    "check out my new video http://tiny.example/abc",
    "subscribe to my channel please",
    "check my channel for free prizes",
    "follow me and subscribe",
]
HAM_CLONES = ["i love this song", "best song ever", "this song is awesome"]


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def _fmt(value, missing=False):
    return "" if missing else f"{value:.4f}"


def make_wine(path, k, seed, alcohol_good, alcohol_bad):
    rng = np.random.default_rng(seed)
    good = rng.random(k) < 0.55
    alcohol = np.where(good, rng.normal(alcohol_good, 1.2, k),
                       rng.normal(alcohol_bad, 0.9, k)).clip(8.0, 14.9)
    sulphates = np.where(good, rng.normal(0.68, 0.18, k),
                         rng.normal(0.55, 0.12, k)).clip(0.25, 2.0)
    strong = rng.random(k) < 0.03  # rare heavily-sulphited bottles
    sulphates[strong] *= rng.uniform(1.8, 2.8, strong.sum())
    sulphates = sulphates.clip(0.25, 2.0)
    citric = np.where(good, rng.normal(0.42, 0.20, k),
                      rng.normal(0.27, 0.15, k)).clip(0.0, 1.0)
    acidic = rng.random(k) < 0.04
    citric[acidic] = rng.uniform(0.75, 1.0, acidic.sum())
    quality = np.where(good, 6, 5) + rng.integers(-1, 2, k)
    quality = quality.clip(3, 9)

    header = ["fixed_acidity", "volatile_acidity", "acidity_citric",
              "residual_sugar", "chlorides", "free_sulfur_dioxide",
              "total_sulfur_dioxide", "density", "ph", "sulphates",
              "alcohol", "quality"]
    rows = []
    for i in range(k):
        rows.append([
            _fmt(rng.normal(8.2, 1.6)),
            _fmt(max(0.08, rng.normal(0.53, 0.17) - 0.06 * good[i])),
            _fmt(citric[i]),
            _fmt(max(0.9, rng.lognormal(0.8, 0.5))),
            _fmt(max(0.01, rng.normal(0.087, 0.04))),
            _fmt(max(1.0, rng.normal(16.0, 9.0))),
            _fmt(max(6.0, rng.normal(46.0, 28.0))),
            _fmt(rng.normal(0.9967, 0.0019)),
            _fmt(rng.normal(3.31, 0.15)),
            _fmt(sulphates[i]),
            _fmt(alcohol[i]),
            str(int(quality[i])),
        ])
    _write_csv(path, header, rows)


def make_weather(path, k, seed):
    rng = np.random.default_rng(seed)
    rain = rng.random(k) < 0.3
    numeric = {
        "MinTemp": rng.normal(12, 5, k),
        "MaxTemp": rng.normal(23, 6, k),
        "Rainfall": np.where(rain, rng.exponential(7, k),
                             rng.exponential(0.8, k)).clip(0, 60),
        "Evaporation": rng.normal(5.5, 2.5, k).clip(0, 20),
        "Sunshine": np.where(rain, rng.normal(5, 2.5, k),
                             rng.normal(8.5, 2.5, k)).clip(0, 14),
        "WindGustSpeed": rng.normal(40, 12, k).clip(10, 100),
        "WindSpeed9am": rng.normal(14, 7, k).clip(0, 60),
        "WindSpeed3pm": rng.normal(19, 8, k).clip(0, 70),
        "Humidity9am": np.where(rain, rng.normal(80, 12, k),
                                rng.normal(63, 15, k)).clip(5, 100),
        "Humidity3pm": np.where(rain, rng.normal(74, 14, k),
                                rng.normal(46, 16, k)).clip(5, 100),
        "Pressure9am": np.where(rain, rng.normal(1013, 6, k),
                                rng.normal(1019, 6, k)).clip(995, 1038),
        "Pressure3pm": np.where(rain, rng.normal(1010, 6, k),
                                rng.normal(1017, 6, k)).clip(995, 1038),
        "Cloud9am": np.where(rain, rng.normal(6.5, 1.8, k),
                             rng.normal(4, 2.5, k)).clip(0, 8),
        "Cloud3pm": np.where(rain, rng.normal(6.8, 1.8, k),
                             rng.normal(4, 2.5, k)).clip(0, 8),
        "Temp9am": rng.normal(17, 5.5, k),
        "Temp3pm": rng.normal(21.5, 6, k),
        "RainToday": np.where(rain, rng.random(k) < 0.5,
                              rng.random(k) < 0.12).astype(float),
    }
    # sparse columns, as in real station data
    miss = {
        "Evaporation": rng.random(k) < 0.20,
        "Sunshine": rng.random(k) < 0.20,
        "Cloud9am": rng.random(k) < 0.12,
        "Cloud3pm": rng.random(k) < 0.12,
    }
    onehot_cols = [f"{grp}_{d}" for grp in ("WindGustDir", "WindDir9am",
                                            "WindDir3pm") for d in COMPASS]
    dirs = {grp: rng.integers(0, 16, k)
            for grp in ("WindGustDir", "WindDir9am", "WindDir3pm")}

    header = list(numeric) + onehot_cols + ["RainTomorrow"]
    rows = []
    for i in range(k):
        row = [_fmt(numeric[c][i], miss.get(c, np.zeros(k, bool))[i])
               for c in numeric]
        for grp in ("WindGustDir", "WindDir9am", "WindDir3pm"):
            row.extend("1" if j == dirs[grp][i] else "0" for j in range(16))
        row.append(str(int(rain[i])))
        rows.append(row)
    # a few station-outage rows (everything missing) the loader must drop
    for bad in (5, 57, 141):
        rows[bad][:-1] = [""] * (len(header) - 1)
    _write_csv(path, header, rows)


def make_youtube(path, k, seed, spam_rate=0.4, clone_rate=0.15,
                 kw_rate=0.55, cross_rate=0.10):
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(k):
        spam = rng.random() < spam_rate
        if rng.random() < clone_rate:
            text = str(rng.choice(SPAM_CLONES if spam else HAM_CLONES))
            if spam and rng.random() < cross_rate:
                text += " if you love this song"
        else:
            n = int(rng.integers(4, 13))
            words = list(rng.choice(FILLER, size=n))
            extra = SPAM_WORDS if spam else HAM_WORDS
            for _ in range(int(rng.integers(1, 3))):
                words[int(rng.integers(0, n))] = str(rng.choice(extra))
            if rng.random() < kw_rate:
                ph = str(rng.choice(SPAM_PHRASES if spam else HAM_PHRASES))
                pos = int(rng.integers(0, n + 1))
                words = words[:pos] + [ph] + words[pos:]
            if rng.random() < cross_rate:
                ph = str(rng.choice(HAM_PHRASES if spam else SPAM_PHRASES))
                words.insert(int(rng.integers(0, len(words))), ph)
            text = " ".join(words)
        rows.append([text, str(int(spam))])
    _write_csv(path, ["CONTENT", "CLASS"], rows)


def main():
    FIXTURES.mkdir(exist_ok=True)
    make_wine(FIXTURES / "redwine_sample.csv", 260, seed=101,
              alcohol_good=11.4, alcohol_bad=9.9)
    make_wine(FIXTURES / "whitewine_sample.csv", 320, seed=202,
              alcohol_good=11.0, alcohol_bad=9.6)
    make_weather(FIXTURES / "weather_sample.csv", 320, seed=303)
    make_youtube(FIXTURES / "youtube_sample.csv", 240, seed=404)


if __name__ == "__main__":
    main()
