"""Fine-tuning hyperparameters.

Defaults follow the standard BERT fine-tuning recipe: learning rate
2e-5, 3 epochs, batch size 32. The large model halves the batch size to
16 so the run fits in the same memory budget, and the config refuses to
let a large batch exceed the base preset.
"""

from __future__ import annotations

from dataclasses import dataclass

MODEL_NAMES = {"base": "bert-base-uncased", "large": "bert-large-uncased"}
BATCH_PRESETS = {"base": 32, "large": 16}


@dataclass(frozen=True)
class FinetuneConfig:
    model_size: str = "base"
    learning_rate: float = 2e-5
    epochs: float = 3.0
    batch_size: int | None = None
    max_seq_len: int = 64
    seed: int = 1

    def __post_init__(self) -> None:
        if self.model_size not in MODEL_NAMES:
            raise ValueError(
                f"model_size must be one of {sorted(MODEL_NAMES)}, got {self.model_size!r}"
            )
        if self.batch_size is None:
            object.__setattr__(self, "batch_size", BATCH_PRESETS[self.model_size])
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not self.epochs > 0:
            raise ValueError(f"epochs must be > 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_seq_len < 1:
            raise ValueError(f"max_seq_len must be >= 1, got {self.max_seq_len}")
        if self.model_size == "large" and self.batch_size > BATCH_PRESETS["base"]:
            raise ValueError(
                f"batch_size {self.batch_size} for large exceeds the base preset "
                f"{BATCH_PRESETS['base']}; the large model needs the smaller batch"
            )

    @property
    def model_name(self) -> str:
        return MODEL_NAMES[self.model_size]
