from .distances import hausdorff, hd95, mde, nearest_distances
from .postprocess import FrontSet, enhance_ocean, extract_front
from .report import (
    GROUP_KEYS,
    ImageResult,
    MetricsReport,
    ReportSection,
    build_report,
    format_report,
    image_result,
    load_front_csv,
    report_to_csv,
    save_front_csv,
)
from .segmetrics import (
    ClassScores,
    confusion_counts,
    macro_iou,
    scores_from_counts,
    segmentation_scores,
)

__all__ = [
    "GROUP_KEYS",
    "ClassScores",
    "FrontSet",
    "ImageResult",
    "MetricsReport",
    "ReportSection",
    "build_report",
    "confusion_counts",
    "enhance_ocean",
    "extract_front",
    "format_report",
    "hausdorff",
    "hd95",
    "image_result",
    "load_front_csv",
    "macro_iou",
    "mde",
    "nearest_distances",
    "report_to_csv",
    "save_front_csv",
    "scores_from_counts",
    "segmentation_scores",
]
