import json
import os

import pandas as pd

import rainbowbounds

global HAPPY_BOUNDS_CSV, REPORT_SCHEMA_JSON
RESOURCES = os.path.join(os.path.dirname(rainbowbounds.__file__), "resources")
HAPPY_BOUNDS_CSV = os.path.join(RESOURCES, "happy_bounds.csv")
REPORT_SCHEMA_JSON = os.path.join(RESOURCES, "feasibility_report.schema.json")


def load_schema(name: str) -> dict:
    """resources/<name>.schema.json を読み込む"""
    path = os.path.join(RESOURCES, f"{name}.schema.json")
    with open(path, encoding="utf-8") as f:
        return json.load(f)


class GoldenData(object):
    def __init__(self):
        self.happy_bounds_df = pd.read_csv(HAPPY_BOUNDS_CSV)

    @property
    def happy_bounds(self) -> pd.DataFrame:
        """
        ## Summary:
            l = ceil(k/2) の上界表（k = 3..103）
        Returns:
            pd.DataFrame: 上界表のデータフレーム
        ## DataFrame:
            | k | l | bound |
            |---|---|-------|
            | 3 | 2 | 2     |
            | 4 | 2 | 4     |
        """
        return self.happy_bounds_df.copy()

    @property
    def happy_bounds_bytes(self) -> bytes:
        with open(HAPPY_BOUNDS_CSV, "rb") as f:
            return f.read()
