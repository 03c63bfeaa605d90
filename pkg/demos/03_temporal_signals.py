#!/usr/bin/env python3
"""Walkthrough: burstiness, cross-source co-activity, and hourly overlap.

Three synthetic posting schedules: a clock-like channel, a Poisson-ish
channel, and a spike poster. Burstiness separates them; the 6-hour
co-activity series and the active-hour Jaccard matrix show how their
schedules align.
"""

import random
from datetime import datetime, timedelta, timezone

from narracoord import burstiness, coactivity, hourly_overlap
from narracoord.corpus import Record, SourceSlice
from narracoord.corpus import detect_language, text_hash

rng = random.Random(11)
START = datetime(2025, 6, 1, tzinfo=timezone.utc)


def make_slice(source, offsets_s):
    records = []
    for i, off in enumerate(sorted(offsets_s)):
        text = f"post number {i} from {source}"
        records.append(Record(
            platform="telegram", event_id="demo", source=source,
            record_id=f"{source}-{i:04d}",
            timestamp=START + timedelta(seconds=off),
            text=text, lang=detect_language(text), text_hash=text_hash(text),
        ))
    return SourceSlice("demo", "telegram", source, tuple(records))


clockwork = make_slice("clockwork", [i * 3600 for i in range(240)])
poissonish = make_slice("poissonish", [
    sum(rng.expovariate(1 / 3600) for _ in range(i + 1)) for i in range(240)
])
spikes = []
t = 0.0
while len(spikes) < 240:
    t += rng.expovariate(1 / 86400)          # a burst roughly daily
    spikes.extend(t + rng.expovariate(1 / 30) for _ in range(12))
spiky = make_slice("spiky", spikes[:240])

print("burstiness index ((sigma - mu) / (sigma + mu)); -1 clock-like, "
      "0 Poisson, +1 spiky:")
for slc in (clockwork, poissonish, spiky):
    score = burstiness(slc.timestamps)
    print(f"  {slc.source:<11} B={score.burstiness:+.3f} "
          f"mean gap {score.mean_iat_s / 3600:.2f}h over {score.n_gaps} gaps")

series = coactivity([clockwork, poissonish, spiky])
print(f"\n6-hour co-activity over {len(series.bins)} bins: "
      f"mean {series.mean_active_sources:.2f} active sources, "
      f"{series.full_coactivity_fraction:.1%} of bins at full co-activity")

overlap = hourly_overlap([clockwork, poissonish, spiky])
print("\nactive-hour Jaccard matrix:")
names = [s for _, s in overlap.sources]
print("             " + "  ".join(f"{n:>11}" for n in names))
for i, name in enumerate(names):
    row = "  ".join(f"{overlap.jaccard[i, j]:>11.3f}" for j in range(len(names)))
    print(f"{name:>12} {row}")
