from .random import random_oracle, random_player
from .stalling import stalling_oracle

__all__ = ["random_oracle", "random_player", "stalling_oracle"]
