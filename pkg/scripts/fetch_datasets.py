#!/usr/bin/env python3
"""Download and preprocess the real evaluation datasets into data/.

Produces four CSVs with the schemas the shipped configs and LF files
expect (needs internet access):

  data/redwine.csv    wine-quality red: 11 features + quality
  data/whitewine.csv  wine-quality white: 11 features + quality
  data/weather.csv    rain observations: 16 numerics + RainToday +
                      3x16 one-hot wind directions + RainTomorrow (0/1)
  data/youtube.csv    comment spam: CONTENT + CLASS

The wine features are renamed to snake_case (citric acid becomes
acidity_citric) so they match the LF spec files.
"""

import csv
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"

WINE_URLS = {
    "redwine": "https://archive.ics.uci.edu/ml/machine-learning-databases/"
               "wine-quality/winequality-red.csv",
    "whitewine": "https://archive.ics.uci.edu/ml/machine-learning-databases/"
                 "wine-quality/winequality-white.csv",
}
WINE_RENAME = {
    "fixed acidity": "fixed_acidity",
    "volatile acidity": "volatile_acidity",
    "citric acid": "acidity_citric",
    "residual sugar": "residual_sugar",
    "chlorides": "chlorides",
    "free sulfur dioxide": "free_sulfur_dioxide",
    "total sulfur dioxide": "total_sulfur_dioxide",
    "density": "density",
    "pH": "ph",
    "sulphates": "sulphates",
    "alcohol": "alcohol",
    "quality": "quality",
}

WEATHER_URL = "https://rattle.togaware.com/weatherAUS.csv"
WEATHER_NUMERIC = [
    "MinTemp", "MaxTemp", "Rainfall", "Evaporation", "Sunshine",
    "WindGustSpeed", "WindSpeed9am", "WindSpeed3pm", "Humidity9am",
    "Humidity3pm", "Pressure9am", "Pressure3pm", "Cloud9am", "Cloud3pm",
    "Temp9am", "Temp3pm",
]
WIND_GROUPS = ["WindGustDir", "WindDir9am", "WindDir3pm"]
COMPASS = ["N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE",
           "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW"]

YOUTUBE_URL = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
               "00380/YouTube-Spam-Collection-v1.zip")


def download(url: str) -> bytes:
    print(f"fetching {url}")
    with urllib.request.urlopen(url, timeout=60) as response:
        return response.read()


def fetch_wine(name: str, url: str) -> None:
    text = download(url).decode("utf-8")
    reader = csv.reader(io.StringIO(text), delimiter=";")
    header = [h.strip().strip('"') for h in next(reader)]
    renamed = [WINE_RENAME.get(col, col) for col in header]
    out = DATA / f"{name}.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(renamed)
        writer.writerows(reader)
    print(f"wrote {out}")


def fetch_weather() -> None:
    text = download(WEATHER_URL).decode("utf-8")
    reader = csv.DictReader(io.StringIO(text))
    header = (WEATHER_NUMERIC + ["RainToday"]
              + [f"{g}_{d}" for g in WIND_GROUPS for d in COMPASS]
              + ["RainTomorrow"])
    yes_no = {"Yes": "1", "No": "0"}
    out = DATA / "weather.csv"
    kept = 0
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for record in reader:
            truth = yes_no.get((record.get("RainTomorrow") or "").strip())
            if truth is None:
                continue  # unlabeled day
            row = [(record.get(col) or "").strip().replace("NA", "")
                   for col in WEATHER_NUMERIC]
            row.append(yes_no.get((record.get("RainToday") or "").strip(), ""))
            for group in WIND_GROUPS:
                direction = (record.get(group) or "").strip()
                row.extend("1" if direction == d else "0" for d in COMPASS)
            row.append(truth)
            writer.writerow(row)
            kept += 1
    print(f"wrote {out} ({kept} rows)")


def fetch_youtube() -> None:
    payload = download(YOUTUBE_URL)
    out = DATA / "youtube.csv"
    kept = 0
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["CONTENT", "CLASS"])
        with zipfile.ZipFile(io.BytesIO(payload)) as bundle:
            for member in sorted(bundle.namelist()):
                if not member.lower().endswith(".csv"):
                    continue
                text = bundle.read(member).decode("utf-8", errors="replace")
                for record in csv.DictReader(io.StringIO(text)):
                    content = record.get("CONTENT")
                    label = (record.get("CLASS") or "").strip()
                    if content is None or label not in ("0", "1"):
                        continue
                    writer.writerow([content, label])
                    kept += 1
    print(f"wrote {out} ({kept} comments)")


def main() -> int:
    DATA.mkdir(exist_ok=True)
    failures = []
    for name, url in WINE_URLS.items():
        try:
            fetch_wine(name, url)
        except Exception as exc:
            failures.append(f"{name}: {exc}")
    for fetch in (fetch_weather, fetch_youtube):
        try:
            fetch()
        except Exception as exc:
            failures.append(f"{fetch.__name__}: {exc}")
    if failures:
        print("\nsome downloads failed (offline?):", file=sys.stderr)
        for failure in failures:
            print(f"  {failure}", file=sys.stderr)
        return 1
    print("\nall datasets ready; the full acceptance suite can now run:")
    print("  pytest tests/test_acceptance.py -v -s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
