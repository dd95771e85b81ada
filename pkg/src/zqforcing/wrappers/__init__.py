from .oracle import OracleWrapper

__all__ = ["OracleWrapper"]
