#!/usr/bin/env python3
"""Regenerates the Sioux Falls data fixtures under data/.

The link table and OD matrix follow the publicly distributed TNTP dataset
(24 nodes, 76 links, 528 positive OD pairs totalling 360600 trips). The
script checks those aggregates before writing anything.
"""
import sys

LINKS = [
    # (init, term, capacity, length, fft)
    (1, 2, 25900.20064, 6, 6), (1, 3, 23403.47319, 4, 4),
    (2, 1, 25900.20064, 6, 6), (2, 6, 4958.180928, 5, 5),
    (3, 1, 23403.47319, 4, 4), (3, 4, 17110.52372, 4, 4), (3, 12, 23403.47319, 4, 4),
    (4, 3, 17110.52372, 4, 4), (4, 5, 17782.7941, 2, 2), (4, 11, 4908.82673, 6, 6),
    (5, 4, 17782.7941, 2, 2), (5, 6, 4947.995469, 4, 4), (5, 9, 10000.0, 5, 5),
    (6, 2, 4958.180928, 5, 5), (6, 5, 4947.995469, 4, 4), (6, 8, 4898.587646, 2, 2),
    (7, 8, 7841.81131, 3, 3), (7, 18, 23403.47319, 2, 2),
    (8, 6, 4898.587646, 2, 2), (8, 7, 7841.81131, 3, 3), (8, 9, 5050.193156, 10, 10),
    (8, 16, 5045.822583, 5, 5),
    (9, 5, 10000.0, 5, 5), (9, 8, 5050.193156, 10, 10), (9, 10, 13915.78842, 3, 3),
    (10, 9, 13915.78842, 3, 3), (10, 11, 10000.0, 5, 5), (10, 15, 13512.00155, 6, 6),
    (10, 16, 4854.917717, 4, 4), (10, 17, 4993.510694, 8, 8),
    (11, 4, 4908.82673, 6, 6), (11, 10, 10000.0, 5, 5), (11, 12, 4908.82673, 6, 6),
    (11, 14, 4876.508287, 4, 4),
    (12, 3, 23403.47319, 4, 4), (12, 11, 4908.82673, 6, 6), (12, 13, 25900.20064, 3, 3),
    (13, 12, 25900.20064, 3, 3), (13, 24, 5091.256152, 4, 4),
    (14, 11, 4876.508287, 4, 4), (14, 15, 5127.526119, 5, 5), (14, 23, 4924.790605, 4, 4),
    (15, 10, 13512.00155, 6, 6), (15, 14, 5127.526119, 5, 5), (15, 19, 14564.75315, 3, 3),
    (15, 22, 9599.180565, 3, 3),
    (16, 8, 5045.822583, 5, 5), (16, 10, 4854.917717, 4, 4), (16, 17, 5229.910063, 2, 2),
    (16, 18, 19679.89671, 3, 3),
    (17, 10, 4993.510694, 8, 8), (17, 16, 5229.910063, 2, 2), (17, 19, 4823.950831, 2, 2),
    (18, 7, 23403.47319, 2, 2), (18, 16, 19679.89671, 3, 3), (18, 20, 23403.47319, 4, 4),
    (19, 15, 14564.75315, 3, 3), (19, 17, 4823.950831, 2, 2), (19, 20, 5002.607563, 4, 4),
    (20, 18, 23403.47319, 4, 4), (20, 19, 5002.607563, 4, 4), (20, 21, 5059.91234, 6, 6),
    (20, 22, 5075.697193, 5, 5),
    (21, 20, 5059.91234, 6, 6), (21, 22, 5229.910063, 2, 2), (21, 24, 4885.357564, 3, 3),
    (22, 15, 9599.180565, 3, 3), (22, 20, 5075.697193, 5, 5), (22, 21, 5229.910063, 2, 2),
    (22, 23, 5000.0, 4, 4),
    (23, 14, 4924.790605, 4, 4), (23, 22, 5000.0, 4, 4), (23, 24, 5078.508436, 2, 2),
    (24, 13, 5091.256152, 4, 4), (24, 21, 4885.357564, 3, 3), (24, 23, 5078.508436, 2, 2),
]

# OD trips in hundreds of vehicles, upper triangle; the matrix is symmetric.
UPPER = {
    1: {2: 1, 3: 1, 4: 5, 5: 2, 6: 3, 7: 5, 8: 8, 9: 5, 10: 13, 11: 5, 12: 2, 13: 5,
        14: 3, 15: 5, 16: 5, 17: 4, 18: 1, 19: 3, 20: 3, 21: 1, 22: 4, 23: 3, 24: 1},
    2: {3: 1, 4: 2, 5: 1, 6: 4, 7: 2, 8: 4, 9: 2, 10: 6, 11: 2, 12: 1, 13: 3,
        14: 1, 15: 1, 16: 4, 17: 2, 18: 0, 19: 1, 20: 1, 21: 0, 22: 1, 23: 0, 24: 0},
    3: {4: 2, 5: 1, 6: 3, 7: 1, 8: 2, 9: 1, 10: 3, 11: 3, 12: 2, 13: 1,
        14: 1, 15: 1, 16: 2, 17: 1, 18: 0, 19: 0, 20: 0, 21: 0, 22: 1, 23: 1, 24: 0},
    4: {5: 5, 6: 4, 7: 4, 8: 7, 9: 7, 10: 12, 11: 15, 12: 6, 13: 6,
        14: 5, 15: 5, 16: 8, 17: 5, 18: 1, 19: 2, 20: 3, 21: 2, 22: 4, 23: 5, 24: 2},
    5: {6: 2, 7: 2, 8: 5, 9: 8, 10: 10, 11: 5, 12: 2, 13: 2,
        14: 1, 15: 2, 16: 5, 17: 2, 18: 0, 19: 1, 20: 1, 21: 1, 22: 2, 23: 1, 24: 0},
    6: {7: 4, 8: 8, 9: 4, 10: 8, 11: 4, 12: 2, 13: 2,
        14: 1, 15: 2, 16: 9, 17: 5, 18: 1, 19: 2, 20: 3, 21: 1, 22: 2, 23: 1, 24: 1},
    7: {8: 10, 9: 6, 10: 19, 11: 5, 12: 7, 13: 4,
        14: 2, 15: 5, 16: 14, 17: 10, 18: 2, 19: 4, 20: 5, 21: 2, 22: 5, 23: 2, 24: 1},
    8: {9: 8, 10: 16, 11: 8, 12: 6, 13: 6,
        14: 4, 15: 6, 16: 22, 17: 14, 18: 3, 19: 7, 20: 9, 21: 4, 22: 5, 23: 3, 24: 2},
    9: {10: 28, 11: 14, 12: 6, 13: 6,
        14: 6, 15: 9, 16: 14, 17: 9, 18: 2, 19: 4, 20: 6, 21: 3, 22: 7, 23: 5, 24: 2},
    10: {11: 40, 12: 20, 13: 19,
         14: 21, 15: 40, 16: 44, 17: 39, 18: 7, 19: 18, 20: 25, 21: 12, 22: 26, 23: 18, 24: 8},
    11: {12: 14, 13: 10,
         14: 16, 15: 14, 16: 14, 17: 10, 18: 1, 19: 4, 20: 6, 21: 4, 22: 11, 23: 13, 24: 6},
    12: {13: 13,
         14: 7, 15: 7, 16: 7, 17: 6, 18: 2, 19: 3, 20: 4, 21: 3, 22: 7, 23: 7, 24: 5},
    13: {14: 6, 15: 7, 16: 6, 17: 5, 18: 1, 19: 3, 20: 6, 21: 6, 22: 13, 23: 8, 24: 8},
    14: {15: 13, 16: 7, 17: 7, 18: 1, 19: 3, 20: 5, 21: 4, 22: 12, 23: 11, 24: 4},
    15: {16: 12, 17: 15, 18: 2, 19: 8, 20: 11, 21: 8, 22: 26, 23: 10, 24: 4},
    16: {17: 28, 18: 5, 19: 13, 20: 16, 21: 6, 22: 12, 23: 5, 24: 3},
    17: {18: 6, 19: 17, 20: 17, 21: 6, 22: 17, 23: 6, 24: 3},
    18: {19: 3, 20: 4, 21: 1, 22: 3, 23: 1, 24: 0},
    19: {20: 12, 21: 4, 22: 12, 23: 3, 24: 1},
    20: {21: 12, 22: 24, 23: 7, 24: 4},
    21: {22: 18, 23: 7, 24: 5},
    22: {23: 21, 24: 11},
    23: {24: 7},
}


def full_matrix():
    m = [[0] * 25 for _ in range(25)]
    for i, row in UPPER.items():
        for j, v in row.items():
            m[i][j] = v
            m[j][i] = v
    return m


def main(outdir):
    nodes = sorted({l[0] for l in LINKS} | {l[1] for l in LINKS})
    assert len(nodes) == 24, len(nodes)
    assert len(LINKS) == 76, len(LINKS)

    m = full_matrix()
    total = sum(sum(r) for r in m)
    positive = sum(1 for i in range(1, 25) for j in range(1, 25) if m[i][j] > 0)
    assert total == 3606, total
    assert positive == 528, positive

    with open(f"{outdir}/SiouxFalls_net.tntp", "w") as f:
        f.write("<NUMBER OF ZONES> 24\n<NUMBER OF NODES> 24\n<FIRST THRU NODE> 1\n")
        f.write("<NUMBER OF LINKS> 76\n<END OF METADATA>\n\n")
        f.write("~ \tInit node \tTerm node \tCapacity \tLength \tFree Flow Time \tB\tPower\tSpeed limit \tToll \tLink Type\t;\n")
        for (a, b, cap, length, fft) in LINKS:
            f.write(f"\t{a}\t{b}\t{cap}\t{length}\t{fft}\t0.15\t4\t0\t0\t1\t;\n")

    with open(f"{outdir}/SiouxFalls_trips.tntp", "w") as f:
        f.write("<NUMBER OF ZONES> 24\n<TOTAL OD FLOW> 360600.0\n<END OF METADATA>\n\n")
        for i in range(1, 25):
            f.write(f"Origin  {i}\n")
            cells = []
            for j in range(1, 25):
                cells.append(f"{j:5d} : {m[i][j] * 100.0:10.1f};")
                if len(cells) == 5:
                    f.write("    " + " ".join(cells) + "\n")
                    cells = []
            if cells:
                f.write("    " + " ".join(cells) + "\n")
            f.write("\n")

    print(f"wrote {outdir}/SiouxFalls_net.tntp and SiouxFalls_trips.tntp")
    print(f"links=76 nodes=24 od_positive={positive} od_total={total * 100}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
