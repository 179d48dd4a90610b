"""End-to-end theorem reproductions."""

from .report import ProofReport, StageRecord, emit_report
from .thm3 import prove_thm3
from .thm4 import prove_thm4
from .thm5 import prove_thm5

__all__ = ["ProofReport", "StageRecord", "emit_report", "prove_thm3", "prove_thm4", "prove_thm5"]
