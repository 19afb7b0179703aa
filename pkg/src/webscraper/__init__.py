"""Tool-augmented web scraping agent with ROUGE-L correctness evaluation."""

__version__ = "0.1.0"
