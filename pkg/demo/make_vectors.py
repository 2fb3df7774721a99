"""Regenerate demo/vectors.txt: synthetic topic-clustered word vectors.

Words listed in a topic share that topic's direction plus seeded noise;
words in several topics average them; every other word in the demo
documents, ontologies and culture graph gets its own random direction.

    python demo/make_vectors.py
"""

import json
from pathlib import Path

import numpy as np

from skillmatch.culture import load_culture_graph
from skillmatch.textkit import tokenize

HERE = Path(__file__).parent
DIM = 32
NOISE = 0.35
SEED = 20200306

TOPICS = {
    "ml": "machine learning deep neural networks nets model models tensorflow pytorch classification classifiers "
          "clustering training trained hyperparameters prediction predictive random forest forests gradient boosting "
          "xgboost feature features engineering regression statistical statistics forecasting image recognition vision "
          "computer algorithms ai artificial intelligence",
    "nlp": "natural language processing text nlp ontology matching semantic web linked data classification mining",
    "data_eng": "spark apache hadoop etl pipelines pipeline warehouse warehousing sql nosql databases database queries "
                "kubernetes docker aws cloud computing distributed systems scala python java code services deployments "
                "deployed automated git javascript web applications software version control data",
    "business": "marketing analytics customer customers segmentation campaigns campaign dashboards dashboard tableau kpi "
                "kpis reporting stakeholders stakeholder sales revenue excel budgets budgeting business intelligence "
                "insights funnels product management strategy market growth clients consulting presentations "
                "requirements negotiation partners accounts quarterly results management process workshops",
    "experiment": "a/b testing experimentation split experiments funnels product analytics",
}


def words_of(text):
    return [t.lower for t in tokenize(text) if not t.is_stopword]


def main():
    rng = np.random.default_rng(SEED)
    centers = {t: rng.standard_normal(DIM) for t in TOPICS}
    topic_words = {}
    for topic, words in TOPICS.items():
        for w in words.split():
            topic_words.setdefault(w, []).append(topic)
    cg = load_culture_graph()
    for pole in cg.poles:
        centers[pole.name] = rng.standard_normal(DIM)
        for term in pole.terms():
            for w in words_of(term):
                for part in [w, *w.split("-")]:
                    topic_words.setdefault(part, []).append(pole.name)
    vocab = set(topic_words)
    for f in sorted(HERE.glob("*/*.json")):
        doc = json.loads(f.read_text())
        vocab.update(words_of(" ".join(doc["sections"].values())))
    for f in sorted(HERE.glob("*_ontology.csv")):
        for line in f.read_text().splitlines():
            if not line.startswith("#"):
                vocab.update(words_of(line.replace(",", " ").replace("|", " ")))
    vocab.discard("concept")
    lines = []
    for w in sorted(vocab):
        topics = sorted(set(topic_words.get(w, [])))
        base = np.mean([centers[t] for t in topics], axis=0) if topics else rng.standard_normal(DIM)
        vec = base / np.linalg.norm(base) + NOISE * rng.standard_normal(DIM) / np.sqrt(DIM)
        lines.append(w + " " + " ".join(f"{x:.6f}" for x in vec))
    (HERE / "vectors.txt").write_text(f"{len(lines)} {DIM}\n" + "\n".join(lines) + "\n")
    print(f"wrote {len(lines)} vectors")


if __name__ == "__main__":
    main()
