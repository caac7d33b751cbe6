from .ablation import AblationRow, ablate, ablation_to_csv, format_ablation_table
from .batching import batch_from_pairs, image_to_input
from .config import (
    SCALES,
    TrainConfig,
    apply_overrides,
    config_from_mapping,
    load_config,
    save_config,
)
from .inference import (
    evaluate_scenes,
    network_from_checkpoint,
    predict,
    predict_zonemap,
    validation_macro_iou,
)
from .loop import (
    EpochStats,
    RunRecord,
    load_run_record,
    seed_everything,
    split_validation,
    train,
)

__all__ = [
    "AblationRow",
    "EpochStats",
    "RunRecord",
    "SCALES",
    "TrainConfig",
    "ablate",
    "ablation_to_csv",
    "apply_overrides",
    "batch_from_pairs",
    "config_from_mapping",
    "evaluate_scenes",
    "format_ablation_table",
    "image_to_input",
    "load_config",
    "load_run_record",
    "network_from_checkpoint",
    "predict",
    "predict_zonemap",
    "save_config",
    "seed_everything",
    "split_validation",
    "train",
    "validation_macro_iou",
]
