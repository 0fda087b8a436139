"""Small covers, their index-two subtori in general position, and orbit spaces."""

__version__ = "0.1.0"
