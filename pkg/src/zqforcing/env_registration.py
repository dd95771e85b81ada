"""
ZqForcingEnv を Gymnasium に登録するだけのファイル。

    import zqforcing.env_registration
    env = gym.make("ZqForcing-v0", graph=gen_spider(1), q=1)
"""

import gymnasium as gym

from .env import ZqForcingEnv  # noqa: F401

_ENV_ID = "ZqForcing-v0"

if _ENV_ID not in gym.envs.registry:
    gym.register(id=_ENV_ID, entry_point="zqforcing.env:ZqForcingEnv")
