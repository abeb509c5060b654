"""Detecting behaviors in a symbol stream and growing the forest.

Feeds a hand-written symbol sequence through the behavior detector,
inserts each discovered path into the prefix forest, and prints the
resulting tree, both as text and as Graphviz DOT.
"""

from behaviorforest import (
    BehaviorDetector,
    BehaviorForest,
    ReducedSymbol,
    forest_to_dot,
)

# Three quiet samples, an excursion (2, 3, 2), a return to quiet, then a
# second excursion (2, 3, 4) that is cut off by the end of the stream.
SYMBOLS = [1, 1, 1, 2, 3, 2, 1, 1, 1, 1, 1, 2, 3, 4]


def main() -> None:
    detector = BehaviorDetector()  # defaults: 3 repeats end a behavior, 2 arm one
    forest = BehaviorForest()

    print("stream:", SYMBOLS)
    for i, s in enumerate(SYMBOLS):
        db = detector.step(ReducedSymbol(s, (i, i + 1), 1))
        if db is not None:
            receipt = forest.insert(db.path)
            print(
                f"  at sample {i}: behavior {db.path} raw span {db.raw_span} "
                f"({db.termination}), new path: {receipt.created_new_node}"
            )
    db = detector.flush()  # end of stream closes any open behavior
    if db is not None:
        receipt = forest.insert(db.path)
        print(
            f"  at end of stream: behavior {db.path} raw span {db.raw_span} "
            f"({db.termination}), new path: {receipt.created_new_node}"
        )

    print("\nforest nodes (path, traversals, completions):")
    for path, node in forest.iter_nodes():
        print(f"  {path}  weight={node.edge_weight}  terminal={node.terminal_count}")

    print("\nterminal paths:", forest.terminal_paths())

    print("\nDOT export (render with: dot -Tpng forest.dot -o forest.png):")
    print(forest_to_dot(forest))


if __name__ == "__main__":
    main()
