from .attention import (
    SwinBlock,
    SwinBlockPair,
    WindowAttention,
    scaled_dot_attention,
    shift_attention_mask,
    window_partition,
    window_reverse,
)
from .checkpoint import MAGIC, Checkpoint, load_checkpoint, load_into, save_checkpoint
from .context import ContextBranch, ContextConfig
from .hooks import (
    HOOK_TYPES,
    CbamHook,
    EscaHook,
    SaHook,
    SenetHook,
    center_crop_half,
    combine_features,
    make_hook,
)
from .network import (
    HOOK_CHOICES,
    HOOK_DEPTHS,
    SUPERVISION_MODES,
    ModelOutput,
    NetworkConfig,
    TwoBranchNet,
    load_pretrained_context,
    network_config_from_dict,
    network_config_to_dict,
)
from .target import TAP_DEEP, TAP_FINE, ConvBlock, TargetBranch, TargetConfig

__all__ = [
    "HOOK_CHOICES",
    "HOOK_DEPTHS",
    "HOOK_TYPES",
    "SUPERVISION_MODES",
    "TAP_DEEP",
    "TAP_FINE",
    "CbamHook",
    "Checkpoint",
    "ContextBranch",
    "ContextConfig",
    "ConvBlock",
    "EscaHook",
    "ModelOutput",
    "NetworkConfig",
    "SaHook",
    "SenetHook",
    "SwinBlock",
    "SwinBlockPair",
    "TargetBranch",
    "TargetConfig",
    "TwoBranchNet",
    "WindowAttention",
    "center_crop_half",
    "combine_features",
    "load_checkpoint",
    "MAGIC",
    "load_into",
    "load_pretrained_context",
    "make_hook",
    "network_config_from_dict",
    "network_config_to_dict",
    "save_checkpoint",
    "scaled_dot_attention",
    "shift_attention_mask",
    "window_partition",
    "window_reverse",
]
