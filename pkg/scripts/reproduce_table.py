#!/usr/bin/env python3
"""
木の Z_1 センサスを計算し、公表値の表と突き合わせるスクリプト
"""

import argparse
import csv
import os
import sys
import time
from datetime import datetime

import yaml

from zqforcing.census import FREE_TREE_COUNTS, PUBLISHED_COUNTS, census, compare_with_published, write_census_csv
from zqforcing.config import config_from_dict


def main():
    parser = argparse.ArgumentParser(description="Reproduce the Z_1 tree census table")
    parser.add_argument("--n-min", type=int, default=3, help="Smallest vertex count (default: 3)")
    parser.add_argument("--n-max", type=int, default=None, help="Largest vertex count (default: verify.census_n)")
    parser.add_argument("--config", default="config.yaml", help="Config file (default: config.yaml)")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes (default: config)")
    args = parser.parse_args()

    # 設定ファイルを読み込み
    with open(args.config, "r", encoding="utf-8") as f:
        app = config_from_dict(yaml.safe_load(f) or {})

    n_max = args.n_max or app.verify.census_n
    workers = args.workers or app.workers

    # 出力ディレクトリ（実行ごとにタイムスタンプ付き）
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    run_dir = os.path.join(app.output_dir, f"census_{timestamp}")
    os.makedirs(run_dir, exist_ok=True)

    print(f"Census n={args.n_min}..{n_max} with {workers} worker(s)")
    start = time.time()
    rows = census(args.n_min, n_max, workers=workers, config=app.census, progress=True)
    elapsed = time.time() - start

    table_path = os.path.join(run_dir, "census.csv")
    write_census_csv(rows, table_path)

    # 公表値との比較表
    comparison_path = os.path.join(run_dir, "comparison.csv")
    with open(comparison_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["n", "k", "published", "computed", "match"])
        for row in rows:
            for k, published in enumerate(PUBLISHED_COUNTS.get(row.n, ()), start=1):
                computed = row.counts.get(k, 0)
                writer.writerow([row.n, k, published, computed, published == computed])

    mismatches = compare_with_published(rows)

    print("\n" + "=" * 60)
    print("CENSUS SUMMARY")
    print("=" * 60)
    for row in rows:
        expected = FREE_TREE_COUNTS.get(row.n)
        mark = "✓" if row.total == expected else "✗"
        cells = " ".join(f"{row.counts.get(k, 0)}" for k in range(1, max(row.counts) + 1))
        print(f"{mark} n={row.n:2d} trees={row.total:7d}  {cells}")
    print(f"Elapsed: {elapsed:.1f}s")
    if mismatches:
        print(f"✗ {len(mismatches)} cell(s) differ from the published table:")
        for n, k, expected, actual in mismatches:
            print(f"  n={n} k={k}: published {expected}, computed {actual}")
    else:
        print("✓ All cells match the published table")
    print("=" * 60)
    print("Results saved to:")
    print(f"  Census: {table_path}")
    print(f"  Comparison: {comparison_path}")

    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
