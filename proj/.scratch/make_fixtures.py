#!/usr/bin/env python3
"""Deterministic test fixture generator.

Plan: 40 SAR rows total.
  - 18 clusters i=0..17, 2 h apart, each with one buoy record at t_i+60
    claimed by one winning SAR row at t_i (dist 0).
  - clusters 0..3 also get a losing SAR row at t_i+30 offset 0.001 deg lat
    (closer in time, farther in space -> loses the distance-first contest).
  - 18 lone SAR rows at t_i+3600, lat_i+2 (no buoy in window).
  - clusters 0..11 complete the cascade (emitted = 12)
  - clusters 12..14 lack precip (dropped_no_precip = 3)
  - clusters 15..17 lack humidity (dropped_no_humidity = 3)
Expected counters: sar_rows=40, sar_without_buoy=18, dropped_dedup=4,
dropped_no_precip=3, dropped_no_humidity=3, emitted=12.

Tie-break exercises:
  - precip cluster 1: decoy at larger |dt| loses.
  - precip cluster 2: equal |dt| pair, closer distance wins (4.5).
  - precip cluster 3: equal |dt| and distance, earlier time wins (1.25).
  - humidity cluster 4: decoy at |dt|=1700 loses to 560.
  - humidity cluster 6: exactly at the 1800 s window edge (inclusive).
  - humidity cluster 8: nearest-in-time candidate is outside the distance
    cap, the farther-in-time one inside it wins (0.0085).
"""
import math
import random
from datetime import datetime, timezone

T0 = int(datetime(2024, 3, 15, tzinfo=timezone.utc).timestamp())

def iso(t):
    return datetime.fromtimestamp(t, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

def u10_buoy(w, z):
    return 8.87403 * w / math.log(z / 0.0016)

wind = [5.2, 7.8, 3.4, 9.1, 11.6, 6.0, 4.7, 8.3, 12.9, 5.8, 7.1, 10.4,
        6.6, 9.7, 4.1, 8.9, 13.5, 7.4]
height = [4, 5, 10, 5, 4, 10, 5, 4, 5, 10, 4, 5, 10, 4, 5, 10, 4, 5]
tair = [14.2, 16.8, 9.5, 18.3, 12.1, 15.0, 11.4, 17.2, 13.6, 10.8, 16.1, 14.9,
        12.7, 15.5, 9.9, 17.8, 11.2, 13.0]
# sea-air contrast: unstable by default, stable at 3/9/16, neutral at 5
dT = [1.5] * 18
for i in (3, 9, 16):
    dT[i] = -2.0
dT[5] = 0.0
pres = [1013.2, 1009.8, 1017.5, 1011.0, 1015.3, 1012.4, 1018.1, 1008.6, 1014.7,
        1010.2, 1016.9, 1013.8, 1009.1, 1015.8, 1012.0, 1017.2, 1010.6, 1014.1]
no_waves = {2, 7}

precip_val = [0.0, 1.2, 4.5, 1.25, 2.8, 0.0, 3.3, 0.6, 5.9, 0.0, 1.8, 2.2]
precip_nohum = {15: 0.9, 16: 2.4, 17: 7.0}
q10_val = [0.0082, 0.0097, 0.0063, 0.0105, 0.0078, 0.0091, 0.0074, 0.0102,
           0.0085, 0.0068, 0.0095, 0.0088]
q10_noprecip = {12: 0.0079, 13: 0.0083, 14: 0.0077}

def lat(i):
    return 40.0 + 0.5 * i

def lon(i):
    return -70.0 + 0.25 * i

def t_cluster(i):
    return T0 + 7200 * i

sar, buoy, precip, humidity = [], [], [], []

for i in range(18):
    t = t_cluster(i)
    tb = t + 60
    u10 = u10_buoy(wind[i], height[i])
    pv = precip_val[i] if i < 12 else precip_nohum.get(i, 0.0)
    s_wind = round(1.15 * u10 + 0.3 + 0.25 * pv, 2)
    sar.append((t, lat(i), lon(i), s_wind))
    if i < 4:  # dedup loser: closer in time, farther in space
        sar.append((t + 30, lat(i) + 0.001, lon(i), round(1.1 * u10, 2)))
    sar.append((t + 3600, lat(i) + 2.0, lon(i), round(6.0 + 0.37 * i, 2)))

    hs = "" if i in no_waves else f"{0.25 * wind[i] + 0.4:.2f}"
    tp = "" if i in no_waves else f"{4 + 0.5 * wind[i]:.1f}"
    buoy.append((tb, f"{44001 + i}", lat(i), lon(i), wind[i], height[i],
                 tair[i], round(tair[i] + dT[i], 2), pres[i], hs, tp))

    if i < 12:
        if i == 2:  # |dt| tie, distance decides
            precip.append((tb - 100, lat(i) + 0.01, lon(i), 3.0))
            precip.append((tb + 100, lat(i) + 0.003, lon(i), 4.5))
        elif i == 3:  # full tie, earlier time decides
            precip.append((tb - 200, lat(i) + 0.005, lon(i), 1.25))
            precip.append((tb + 200, lat(i) + 0.005, lon(i), 9.0))
        else:
            precip.append((t + 200, lat(i) + 0.01, lon(i), precip_val[i]))
            if i == 1:
                precip.append((t + 500, lat(i) + 0.01, lon(i), 8.8))
    elif i >= 15:
        precip.append((t + 300, lat(i) + 0.01, lon(i), precip_nohum[i]))

    if i < 12:
        if i == 6:  # exactly on the time window edge
            humidity.append((tb + 1800, lat(i) + 0.2, lon(i), q10_val[i]))
        elif i == 8:  # nearest in time is too far away in space
            humidity.append((tb + 100, lat(i) + 0.3, lon(i), 0.0031))
            humidity.append((tb + 900, lat(i) + 0.1, lon(i), q10_val[i]))
        else:
            humidity.append((t - 500, lat(i) + 0.1, lon(i), q10_val[i]))
            if i == 4:
                humidity.append((tb + 1700, lat(i) + 0.1, lon(i), 0.0199))
    elif i < 15:
        humidity.append((t + 100, lat(i) + 0.1, lon(i), q10_noprecip[i]))

# unclaimed buoys and far-away decoys
buoy.append((T0 + 45 * 3600, "46001", 55.0, -60.0, 6.3, 5, 8.0, 9.0, 1011.5,
             "1.9", "7.0"))
buoy.append((T0 + 47 * 3600, "46002", 55.5, -60.5, 9.8, 4, 7.2, 8.5, 1013.9,
             "2.6", "8.4"))
precip.append((T0 + 46 * 3600, 55.2, -60.2, 1.1))
humidity.append((T0 + 46 * 3600, 55.3, -60.3, 0.0059))

rng = random.Random(7)
rng.shuffle(sar)
rng.shuffle(buoy)
rng.shuffle(precip)
rng.shuffle(humidity)

out = "tests/fixtures/"

with open(out + "sar.csv", "w") as f:
    f.write("time_iso8601,lat,lon,wind10_ms\n")
    for t, la, lo, w in sar:
        f.write(f"{iso(t)},{la},{lo},{w}\n")

with open(out + "buoy.csv", "w") as f:
    f.write("time_iso8601,buoy_id,lat,lon,wind_ms,anemometer_height_m,"
            "tair_c,tsea_c,pres_hpa,hs_m,tp_s\n")
    for tb, bid, la, lo, w, z, ta, ts, p, hs, tp in buoy:
        f.write(f"{iso(tb)},{bid},{la},{lo},{w},{z},{ta},{ts},{p},{hs},{tp}\n")

with open(out + "precip.csv", "w") as f:
    f.write("time_iso8601,lat,lon,rain_mmhr\n")
    for t, la, lo, v in precip:
        f.write(f"{iso(t)},{la},{lo},{v}\n")

with open(out + "humidity.csv", "w") as f:
    f.write("time_iso8601,lat,lon,q10_kgkg\n")
    for t, la, lo, v in humidity:
        f.write(f"{iso(t)},{la},{lo},{v}\n")

with open(out + "bad_sar.csv", "w") as f:
    f.write("time_iso8601,lat,lon,wind10_ms\n")
    f.write("2024-03-15T00:00:00Z,40.0,-70.0,7.5\n")
    f.write("2024-03-15T01:00:00Z,95.0,-70.0,6.0\n")

print("sar", len(sar), "buoy", len(buoy), "precip", len(precip),
      "humidity", len(humidity))
for i in range(12):
    print(i, iso(t_cluster(i) + 60), f"{44001 + i}",
          f"u10={u10_buoy(wind[i], height[i]):.6f}")
