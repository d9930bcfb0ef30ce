"""frequtil: classifies itemsets of a quantitative transaction database by frequency and utility."""
