# Tokenization and vocabulary construction.
#
# Everything downstream runs on a lowercase token stream: words,
# punctuation, and sentence boundaries.  The vocabulary keeps the most
# frequent words and funnels the rest through <unk>.

from wordpredict import build_vocabulary, tokenize
from wordpredict.datasets import synthetic_corpus

text = "Mon père était professeur. L'ami de grand-père arrive!"
for tok in tokenize(text):
    print(f"{tok.kind:18s} {tok.surface}")

# clitics split after the apostrophe, hyphenated words stay whole
print([t.surface for t in tokenize("l'ami du grand-père")])

corpus = synthetic_corpus(20, seed=7)
tokens = tokenize(corpus)
vocab = build_vocabulary(tokens, max_size=50, min_count=2, stopwords={"the", "a"})

print(f"\nvocabulary of {len(vocab)} entries (top 10 by frequency):")
for wid in range(1, 11):
    w = vocab.word_of(wid)
    flag = " (stopword)" if vocab.is_stopword(wid) else ""
    print(f"  {wid:3d} {w:12s} count={vocab.counts[wid]}{flag}")
print("out-of-vocabulary word maps to id", vocab.id_of("zeppelin"))
