import pandas as pd
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.config import get_storage_config


class ResultStore:
    """Parquet store of metrics and pipeline rows, partitioned by (width, alpha)"""

    def __init__(self, data_dir: Optional[str] = None):
        self.data_dir = Path(data_dir or get_storage_config().data_dir)

    def get_partition_path(self, width: int, alpha: int) -> Path:
        """Partition path: data/k<width>/alpha<alpha>/results_k<width>_a<alpha>.parquet"""
        partition_dir = self.data_dir / f"k{width}" / f"alpha{alpha}"
        filename = f"results_k{width}_a{alpha}.parquet"
        return partition_dir / filename

    def append_to_partition(self, existing_file: Path, new_data: pd.DataFrame) -> None:
        """Append rows to an existing partition, deduplicating on fingerprint"""
        if not existing_file.exists():
            raise FileNotFoundError(f"Existing file not found: {existing_file}")

        existing_data = pd.read_parquet(existing_file)
        combined = pd.concat([existing_data, new_data], ignore_index=True)

        # Re-measuring the same instance replaces the earlier row
        combined = combined.drop_duplicates(subset=["fingerprint"], keep="last")
        combined = combined.sort_values("fingerprint").reset_index(drop=True)

        combined.to_parquet(existing_file, compression="snappy", index=False)

    def save_rows(self, rows: List[Dict[str, Any]], width: int, alpha: int) -> str:
        """Save rows for a SINGLE partition, appending if it exists. Returns file path."""
        if not rows:
            raise ValueError("No rows to save")

        df = pd.DataFrame(rows)
        if "fingerprint" not in df.columns:
            raise ValueError("Rows must contain a 'fingerprint' column")
        if "recorded_at" not in df.columns:
            df["recorded_at"] = datetime.now(timezone.utc).isoformat()
        df["width"] = width
        df["alpha"] = alpha

        partition_file = self.get_partition_path(width, alpha)
        if partition_file.exists():
            self.append_to_partition(partition_file, df)
        else:
            partition_file.parent.mkdir(parents=True, exist_ok=True)
            df = df.drop_duplicates(subset=["fingerprint"], keep="last")
            df.sort_values("fingerprint").reset_index(drop=True).to_parquet(
                partition_file, compression="snappy", index=False
            )

        return str(partition_file)

    def read_partition(self, width: int, alpha: int) -> pd.DataFrame:
        """Read stored rows of one partition"""
        partition_file = self.get_partition_path(width, alpha)
        if not partition_file.exists():
            raise FileNotFoundError(f"Partition not found: {partition_file}")
        return pd.read_parquet(partition_file)

    def save_grouped(self, rows: List[Dict[str, Any]]) -> Dict[str, Any]:
        """Save rows spanning several partitions; each row carries 'width' and 'alpha'"""
        grouped: Dict[tuple, List[Dict[str, Any]]] = {}
        for row in rows:
            key = (int(row.get("width") or 0), int(row.get("alpha") or 0))
            grouped.setdefault(key, []).append(row)

        files = []
        for (width, alpha), partition_rows in grouped.items():
            path = self.save_rows(partition_rows, width, alpha)
            files.append({"file_path": path, "width": width, "alpha": alpha,
                          "rows": len(partition_rows)})
        return {
            "success": True,
            "message": f"Saved {len(rows)} rows across {len(files)} partitions",
            "total_rows": len(rows),
            "files": files,
        }

    def list_partitions(self, pattern: str = "*.parquet") -> List[str]:
        """List all stored partition files"""
        return sorted(str(p) for p in self.data_dir.rglob(pattern))
