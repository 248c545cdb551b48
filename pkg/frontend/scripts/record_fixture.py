"""Record the UI test fixture by driving the session service in process.

Produces test/fixture/heart_snapshot.json: one JSON bundle holding every
response the eight panels consume, captured from a real (seeded) session on
the synthetic heart-like table. Rerunning regenerates byte-identical data.
"""
from __future__ import annotations

import io
import json
import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from evovote.service import create_app
from evovote.synth import write_heart_like

OUT = Path(__file__).resolve().parent.parent / "test" / "fixture" / "heart_snapshot.json"

ZEROS = {a: 0 for a in ("KNN", "LR", "MLP", "RF", "GradB")}
STAGE_CROSSOVER = {**ZEROS, "KNN": 3, "RF": 3}
STAGE_MUTATION = {**ZEROS, "KNN": 2}


def wait_idle(client: TestClient, sid: str, deadline: float = 900.0) -> dict:
    start = time.monotonic()
    while True:
        status = client.get(f"/sessions/{sid}").json()
        if status["job"]["state"] == "idle":
            return status
        if status["job"]["state"] == "failed":
            raise RuntimeError(f"job failed: {status['job']['error']}")
        if time.monotonic() - start > deadline:
            raise TimeoutError("job did not finish in time")
        time.sleep(0.5)


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        csv_path = Path(tmp) / "heart.csv"
        write_heart_like(csv_path)
        client = TestClient(create_app(data_dir=tmp))

        created = client.post(
            "/sessions",
            files={"file": ("heart.csv", io.BytesIO(csv_path.read_bytes()), "text/csv")},
            data={"label": "target"},
        )
        created.raise_for_status()
        sid = created.json()["id"]

        client.put(f"/sessions/{sid}/settings",
                   json={"metric_group": "balanced", "n": 50, "k": 10, "seed": 9})
        client.post(f"/sessions/{sid}/search")
        wait_idle(client, sid)

        models = client.get(f"/sessions/{sid}/models").json()["models"]
        top = sorted(models, key=lambda m: m["overall"], reverse=True)
        bucket_ids = [m["id"] for m in top[:2]]
        client.post(f"/sessions/{sid}/bucket", json={"add": bucket_ids})

        client.post(f"/sessions/{sid}/stages",
                    json={"crossover": STAGE_CROSSOVER, "mutation": STAGE_MUTATION})
        status = wait_idle(client, sid)

        client.post(f"/sessions/{sid}/ensemble/evaluate",
                    json={"model_ids": [m["id"] for m in top[:3]]})
        ensemble = client.post(f"/sessions/{sid}/ensemble/evaluate",
                               json={"model_ids": bucket_ids}).json()

        status = client.get(f"/sessions/{sid}").json()
        models = client.get(f"/sessions/{sid}/models").json()["models"]
        detail_ids = [m["id"] for m in
                      sorted(models, key=lambda m: m["overall"], reverse=True)[:60]]

        snapshot = {
            "status": status,
            "models": models,
            "projections": {
                "mds": client.post(f"/sessions/{sid}/projection",
                                   json={"method": "mds"}).json(),
                "tsne": client.post(f"/sessions/{sid}/projection",
                                    json={"method": "tsne", "model_ids": detail_ids,
                                          "perplexity": 10, "iterations": 250}).json(),
            },
            "grid": client.post(f"/sessions/{sid}/grid",
                                json={"selected_ids": bucket_ids}).json(),
            "panels": client.post(f"/sessions/{sid}/panels",
                                  json={"selected_ids": bucket_ids}).json(),
            "stages": [client.get(f"/sessions/{sid}/stages/{i}").json()
                       for i in range(1, status["stages"] + 1)],
            "ensemble": ensemble,
        }

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(snapshot, indent=1, sort_keys=True))
    print(f"wrote {OUT} ({OUT.stat().st_size} bytes, "
          f"{len(snapshot['models'])} models, {status['stages']} stage(s))")


if __name__ == "__main__":
    main()
