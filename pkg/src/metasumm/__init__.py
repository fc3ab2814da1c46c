"""metasumm: route each document to the summarizer predicted to score best.

The toolkit trains paragraph-vector document embeddings, scores four
summarization engines with ROUGE against reference summaries, fits
regressors from embeddings to those scores, and routes new documents to
the engine with the highest predicted score.
"""

__version__ = "0.1.0"
