"""Regenerate the vendored karate club files from networkx's bundled copy.

Run once; the outputs are committed under src/weightflow/data/.
"""
import os

import networkx as nx

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "weightflow", "data")

g = nx.karate_club_graph()
with open(os.path.join(OUT, "karate.edges"), "w") as fh:
    fh.write("# Zachary karate club, 34 members, 78 friendships, unit weights\n")
    for u, v in sorted(tuple(sorted(e)) for e in g.edges()):
        fh.write(f"{u} {v}\n")
with open(os.path.join(OUT, "karate.labels"), "w") as fh:
    fh.write("# faction each member joined after the split\n")
    for v in sorted(g.nodes()):
        fh.write(f"{v} {g.nodes[v]['club'].replace(' ', '_').replace('.', '')}\n")
