#!/usr/bin/env python3
"""Generate the synthetic retrieval benchmark committed under data/benchmark/.

50 topics, 4 documents each. Every topic t gets a private vocabulary:
  bas{t}x  base noun (query head)
  syn{t}x  synonym of the base noun (knowledge-base only)
  mod{t}x  modifier (query dependent)
  col{t}x  collocate co-occurring with the query pair
  dis{t}x  distractor

Query title: "mod{t}x bas{t}x". Relevant documents: a (both query words),
b (synonym + modifier), c (synonym + collocate only — reachable solely via
expansion). Non-relevant: d (modifier + distractor). Token shapes are
chosen so stemming leaves them unchanged.
"""
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "benchmark")
N_TOPICS = 50


def words(t):
    return (f"bas{t}x", f"syn{t}x", f"mod{t}x", f"col{t}x", f"dis{t}x")


def main():
    os.makedirs(OUT, exist_ok=True)

    docs, topics, qrels, kb = [], [], [], []
    for t in range(1, N_TOPICS + 1):
        b, s, q, n, d = words(t)
        docs.append((f"d{t}a", f"{q} {b} {n} {b} {n}"))
        docs.append((f"d{t}b", f"{s} {q} {n}"))
        docs.append((f"d{t}c", f"{s} {n} {s}"))
        docs.append((f"d{t}d", f"{q} {d} {d}"))
        topics.append(f"<top>\n<num> Number: {t}\n<title> Topic: {q} {b}\n</top>\n")
        qrels.append(f"{t} 0 d{t}a 1\n{t} 0 d{t}b 1\n{t} 0 d{t}c 1\n{t} 0 d{t}d 0\n")
        kb.append(f"S\tsyn{t}.n.1\tn\t{b}|{s}\tbenchmark concept {t}\n")

    with open(os.path.join(OUT, "corpus.trec"), "w") as f:
        for doc_id, text in docs:
            f.write(f"<DOC>\n<DOCNO> {doc_id} </DOCNO>\n<TEXT>\n{text}\n</TEXT>\n</DOC>\n")
    with open(os.path.join(OUT, "topics.txt"), "w") as f:
        f.writelines(topics)
    with open(os.path.join(OUT, "qrels.txt"), "w") as f:
        f.writelines(qrels)
    with open(os.path.join(OUT, "benchmark.kb"), "w") as f:
        f.writelines(kb)
    print(f"wrote {len(docs)} documents, {N_TOPICS} topics to {os.path.abspath(OUT)}")


if __name__ == "__main__":
    main()
