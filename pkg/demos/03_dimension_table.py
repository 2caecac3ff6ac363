# The dimension table for m = 3, 4 next to the closed-form values.
# Borderline cells (dimension too small for the general argument) are
# computed but not compared.

import time

from equivar.tables import grid, render, table_rows

cells = grid([3], [0, 1], [-2, -1, 0, 1], [0, 1, 2]) + grid([4], [2], [-2, -1, 0, 1], [0, 1])
t0 = time.perf_counter()
rows = table_rows(cells, path="both")
print(render(rows, "markdown"))
print(f"{len(rows)} cells in {time.perf_counter() - t0:.1f}s;",
      sum(r["status"] == "match" for r in rows), "match,",
      sum(r["status"] == "borderline" for r in rows), "borderline")
