"""Regenerates the word-vector fixture. Vectors are synthetic: concepts in
the same group share a base direction, so t-SNE has structure to recover."""
import numpy as np

rng = np.random.default_rng(7)
width = 16
groups = {
    "animal": ["bird", "cat", "cow", "dog", "horse", "sheep"],
    "vehicle": ["aeroplane", "bicycle", "boat", "bus", "car", "motorbike", "train"],
    "indoor": ["bottle", "chair", "dining", "table", "potted", "plant", "sofa", "tv", "monitor"],
    "scene": ["background", "grass", "sky"],
    "human": ["person"],
}
with open("word_vectors.txt", "w") as out:
    tokens = sum(groups.values(), [])
    out.write(f"{len(tokens)} {width}\n")
    for group, words in groups.items():
        base = rng.normal(0.0, 1.0, width)
        for w in words:
            v = base + rng.normal(0.0, 0.25, width)
            out.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
