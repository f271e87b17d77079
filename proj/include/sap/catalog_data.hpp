#pragma once

// Generated by tools/gen_catalog.py; do not edit by hand.
// Seeds: ldpc=20240801 lift=20240802 dense=20240803

#include <array>
#include <string_view>

namespace sap::catalog_data {

inline constexpr int kVersion = 1;

struct Entry {
    std::string_view name;
    std::string_view family;
    std::string_view alist;
};

inline constexpr std::array<Entry, 10> kEntries = {{
    {"HAMMING_7_4", "hamming",
     R"alist(7 3
3 4
1 1 2 1 2 2 3
4 4 4
1 0 0
2 0 0
1 2 0
3 0 0
1 3 0
2 3 0
1 2 3
1 3 5 7
2 3 6 7
4 5 6 7
)alist"},
    {"BCH_15_7", "bch",
     R"alist(15 8
4 4
1 2 2 3 3 3 3 4 3 2 2 1 1 1 1
4 4 4 4 4 4 4 4
1 0 0 0
1 2 0 0
2 3 0 0
1 3 4 0
2 4 5 0
3 5 6 0
4 6 7 0
1 5 7 8
2 6 8 0
3 7 0 0
4 8 0 0
5 0 0 0
6 0 0 0
7 0 0 0
8 0 0 0
1 2 4 8
2 3 5 9
3 4 6 10
4 5 7 11
5 6 8 12
6 7 9 13
7 8 10 14
8 9 11 15
)alist"},
    {"LDPC_12_6", "ldpc",
     R"alist(12 6
3 6
3 3 3 3 3 3 3 3 3 3 3 3
6 6 6 6 6 6
1 2 3
4 5 6
2 4 5
2 3 4
2 3 5
1 2 5
2 3 6
3 5 6
1 4 6
1 5 6
1 4 6
1 3 4
1 6 9 10 11 12
1 3 4 5 6 7
1 4 5 7 8 12
2 3 4 9 11 12
2 3 5 6 8 10
2 7 8 9 10 11
)alist"},
    {"LDPC_24_12", "ldpc",
     R"alist(24 12
3 6
3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3
6 6 6 6 6 6 6 6 6 6 6 6
1 3 7
2 3 12
4 8 11
1 4 10
3 4 9
1 9 11
2 9 11
2 9 12
5 7 9
5 6 7
2 5 8
3 4 8
5 7 10
5 9 12
7 10 11
2 10 12
1 2 8
1 4 5
1 6 10
3 6 12
3 8 10
6 11 12
4 6 7
6 8 11
1 4 6 17 18 19
2 7 8 11 16 17
1 2 5 12 20 21
3 4 5 12 18 23
9 10 11 13 14 18
10 19 20 22 23 24
1 9 10 13 15 23
3 11 12 17 21 24
5 6 7 8 9 14
4 13 15 16 19 21
3 6 7 15 22 24
2 8 14 16 20 22
)alist"},
    {"LDPC_48_24", "ldpc",
     R"alist(48 24
3 6
3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3
6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6
2 20 22
9 12 14
7 15 24
4 14 16
9 11 14
5 8 16
6 20 23
15 20 22
17 21 24
1 7 20
9 12 24
12 14 21
9 10 17
4 5 20
6 10 11
3 5 15
4 19 23
3 12 23
1 6 18
2 13 23
8 10 22
6 11 18
7 8 16
6 13 19
8 17 21
11 12 17
13 16 22
1 15 16
3 18 24
2 13 17
9 10 19
11 15 21
1 2 24
2 11 15
8 13 23
7 20 22
2 4 12
6 7 22
3 4 14
3 18 19
1 14 18
5 7 9
5 10 16
10 18 21
8 19 23
3 5 13
1 4 24
17 19 21
10 19 28 33 41 47
1 20 30 33 34 37
16 18 29 39 40 46
4 14 17 37 39 47
6 14 16 42 43 46
7 15 19 22 24 38
3 10 23 36 38 42
6 21 23 25 35 45
2 5 11 13 31 42
13 15 21 31 43 44
5 15 22 26 32 34
2 11 12 18 26 37
20 24 27 30 35 46
2 4 5 12 39 41
3 8 16 28 32 34
4 6 23 27 28 43
9 13 25 26 30 48
19 22 29 40 41 44
17 24 31 40 45 48
1 7 8 10 14 36
9 12 25 32 44 48
1 8 21 27 36 38
7 17 18 20 35 45
3 9 11 29 33 47
)alist"},
    {"LDPC_12_6_X2", "ldpc",
     R"alist(24 12
3 6
3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3
6 6 6 6 6 6 6 6 6 6 6 6
1 2 9
4 5 12
2 4 5
2 3 4
3 8 11
1 2 11
3 6 8
3 5 6
6 7 10
1 5 6
6 7 10
1 3 10
3 7 8
6 10 11
8 10 11
8 9 10
2 5 9
5 7 8
2 9 12
9 11 12
1 4 12
7 11 12
1 4 12
4 7 9
1 6 10 12 21 23
1 3 4 6 17 19
4 5 7 8 12 13
2 3 4 21 23 24
2 3 8 10 17 18
7 8 9 10 11 14
9 11 13 18 22 24
5 7 13 15 16 18
1 16 17 19 20 24
9 11 12 14 15 16
5 6 14 15 20 22
2 19 20 21 22 23
)alist"},
    {"LDPC_24_12_X2", "ldpc",
     R"alist(48 24
3 6
3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3
6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6
3 7 13
2 3 12
4 8 11
4 10 13
4 15 21
13 21 23
11 14 21
9 14 24
17 19 21
7 17 18
2 8 17
8 15 16
5 19 22
5 12 21
10 19 23
2 10 24
2 8 13
1 4 5
1 10 18
3 6 24
10 15 20
11 12 18
6 16 19
6 20 23
1 15 19
14 15 24
16 20 23
1 16 22
3 9 16
1 9 11
2 9 23
2 12 21
5 7 9
5 6 19
5 14 20
3 4 20
7 10 17
9 17 24
7 11 22
12 14 22
1 14 20
13 16 17
6 13 22
12 15 18
3 8 22
6 23 24
4 7 18
8 11 18
18 19 25 28 30 41
2 11 16 17 31 32
1 2 20 29 36 45
3 4 5 18 36 47
13 14 18 33 34 35
20 23 24 34 43 46
1 10 33 37 39 47
3 11 12 17 45 48
8 29 30 31 33 38
4 15 16 19 21 37
3 7 22 30 39 48
2 14 22 32 40 44
1 4 6 17 42 43
7 8 26 35 40 41
5 12 21 25 26 44
12 23 27 28 29 42
9 10 11 37 38 42
10 19 22 44 47 48
9 13 15 23 25 34
21 24 27 35 36 41
5 6 7 9 14 32
13 28 39 40 43 45
6 15 24 27 31 46
8 16 20 26 38 46
)alist"},
    {"LDPC_48_24_X2", "ldpc",
     R"alist(96 48
3 6
3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3 3
6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6 6
2 44 46
9 12 14
7 39 48
16 28 38
11 33 38
8 16 29
30 44 47
22 39 44
17 24 45
7 25 44
33 36 48
12 38 45
9 10 17
4 5 20
6 10 35
15 27 29
19 28 47
12 23 27
25 30 42
23 26 37
10 22 32
6 18 35
7 8 40
6 19 37
8 21 41
35 36 41
22 37 40
25 39 40
3 18 48
2 37 41
9 10 43
11 15 21
2 24 25
15 26 35
8 13 23
22 31 44
4 26 36
30 31 46
3 28 38
3 42 43
1 14 42
5 7 33
16 29 34
10 18 45
8 23 43
3 13 29
25 28 48
17 43 45
20 22 26
33 36 38
15 24 31
4 14 40
9 14 35
5 32 40
6 20 23
15 20 46
21 41 48
1 20 31
9 12 24
14 21 36
33 34 41
28 29 44
11 30 34
3 5 39
4 23 43
3 36 47
1 6 18
2 13 47
8 34 46
11 30 42
16 31 32
13 30 43
17 32 45
11 12 17
13 16 46
1 15 16
24 27 42
13 17 26
19 33 34
35 39 45
1 26 48
2 11 39
32 37 47
7 20 46
2 12 28
6 7 22
4 14 27
18 19 27
18 25 38
9 29 31
5 10 40
21 34 42
19 32 47
5 27 37
1 4 24
19 21 41
41 58 67 76 81 95
1 30 33 68 82 85
29 39 40 46 64 66
14 37 52 65 87 95
14 42 54 64 91 94
15 22 24 55 67 86
3 10 23 42 84 86
6 23 25 35 45 69
2 13 31 53 59 90
13 15 21 31 44 91
5 32 63 70 74 82
2 12 18 59 74 85
35 46 68 72 75 78
2 41 52 53 60 87
16 32 34 51 56 76
4 6 43 71 75 76
9 13 48 73 74 78
22 29 44 67 88 89
17 24 79 88 93 96
14 49 55 56 58 84
25 32 57 60 92 96
8 21 27 36 49 86
18 20 35 45 55 65
9 33 51 59 77 95
10 19 28 33 47 89
20 34 37 49 78 81
16 18 77 87 88 94
4 17 39 47 62 85
6 16 43 46 62 90
7 19 38 63 70 72
36 38 51 58 71 90
21 54 71 73 83 93
5 11 42 50 61 79
43 61 63 69 79 92
15 22 26 34 53 80
11 26 37 50 60 66
20 24 27 30 83 94
4 5 12 39 50 89
3 8 28 64 80 82
23 27 28 52 54 91
25 26 30 57 61 96
19 40 41 70 77 92
31 40 45 48 65 72
1 7 8 10 36 62
9 12 44 48 73 80
1 38 56 69 75 84
7 17 66 68 83 93
3 11 29 47 57 81
)alist"},
    {"DENSE_32_16", "custom",
     R"alist(32 16
12 20
8 10 6 10 5 6 8 5 8 7 7 6 12 7 8 6 8 9 7 8 11 9 10 7 8 8 9 6 9 9 10 9
17 19 18 16 15 17 13 19 10 13 17 20 20 11 15 16
1 2 3 6 8 10 13 15 0 0 0 0
1 2 3 6 10 11 12 13 14 15 0 0
1 2 3 4 11 13 0 0 0 0 0 0
1 4 5 6 7 8 9 12 14 16 0 0
1 5 6 12 13 0 0 0 0 0 0 0
4 7 10 12 13 15 0 0 0 0 0 0
1 2 3 9 12 13 15 16 0 0 0 0
4 5 6 8 11 0 0 0 0 0 0 0
1 3 4 6 7 8 13 16 0 0 0 0
4 8 9 10 11 13 15 0 0 0 0 0
1 2 3 6 11 12 14 0 0 0 0 0
2 4 6 8 9 14 0 0 0 0 0 0
2 3 5 6 7 8 9 11 12 13 14 16
2 5 8 11 12 13 16 0 0 0 0 0
2 3 6 10 11 12 15 16 0 0 0 0
1 2 7 11 12 14 0 0 0 0 0 0
2 3 4 5 13 14 15 16 0 0 0 0
2 3 4 6 7 8 9 11 16 0 0 0
1 3 6 10 13 15 16 0 0 0 0 0
1 5 6 7 8 10 15 16 0 0 0 0
2 3 4 5 7 8 9 10 11 12 15 0
1 4 5 8 9 10 13 15 16 0 0 0
2 3 5 6 7 8 12 13 14 15 0 0
1 3 4 10 11 12 16 0 0 0 0 0
1 3 5 8 10 11 12 13 0 0 0 0
1 2 4 5 6 8 12 15 0 0 0 0
1 2 3 4 8 9 12 13 15 0 0 0
4 5 11 12 14 16 0 0 0 0 0 0
2 3 5 6 7 8 10 12 13 0 0 0
2 3 4 7 8 9 11 13 16 0 0 0
2 5 7 10 11 12 13 14 15 16 0 0
1 6 7 8 11 12 13 14 16 0 0 0
1 2 3 4 5 7 9 11 16 19 20 22 24 25 26 27 32 0 0 0
1 2 3 7 11 12 13 14 15 16 17 18 21 23 26 27 29 30 31 0
1 2 3 7 9 11 13 15 17 18 19 21 23 24 25 27 29 30 0 0
3 4 6 8 9 10 12 17 18 21 22 24 26 27 28 30 0 0 0 0
4 5 8 13 14 17 20 21 22 23 25 26 28 29 31 0 0 0 0 0
1 2 4 5 8 9 11 12 13 15 18 19 20 23 26 29 32 0 0 0
4 6 9 13 16 18 20 21 23 29 30 31 32 0 0 0 0 0 0 0
1 4 8 9 10 12 13 14 18 20 21 22 23 25 26 27 29 30 32 0
4 7 10 12 13 18 21 22 27 30 0 0 0 0 0 0 0 0 0 0
1 2 6 10 15 19 20 21 22 24 25 29 31 0 0 0 0 0 0 0
2 3 8 10 11 13 14 15 16 18 21 24 25 28 30 31 32 0 0 0
2 4 5 6 7 11 13 14 15 16 21 23 24 25 26 27 28 29 31 32
1 2 3 5 6 7 9 10 13 14 17 19 22 23 25 27 29 30 31 32
2 4 11 12 13 16 17 23 28 31 32 0 0 0 0 0 0 0 0 0
1 2 6 7 10 15 17 19 20 21 22 23 26 27 31 0 0 0 0 0
4 7 9 13 14 15 17 18 19 20 22 24 28 30 31 32 0 0 0 0
)alist"},
    {"DENSE_48_24", "custom",
     R"alist(48 24
17 30
11 12 11 10 11 12 14 13 10 13 10 12 8 11 10 12 16 11 10 12 8 8 8 11 12 13 9 15 15 12 15 17 13 14 17 9 15 9 12 10 10 15 11 14 14 15 11 11
23 21 24 20 20 19 19 29 23 24 23 27 24 21 23 30 21 27 22 23 26 29 29 25
2 5 7 8 9 10 14 18 20 22 23 0 0 0 0 0 0
1 3 6 9 10 15 16 17 19 22 23 24 0 0 0 0 0
2 3 4 5 7 8 11 19 21 22 23 0 0 0 0 0 0
1 6 10 11 15 17 18 20 21 22 0 0 0 0 0 0 0
2 6 8 12 13 15 16 18 21 23 24 0 0 0 0 0 0
2 10 11 12 13 14 15 16 19 22 23 24 0 0 0 0 0
1 3 4 7 8 9 11 12 13 15 16 17 18 20 0 0 0
1 3 5 8 9 11 14 15 16 17 20 21 22 0 0 0 0
2 5 7 9 11 12 19 21 23 24 0 0 0 0 0 0 0
1 3 6 7 8 9 12 15 18 19 20 23 24 0 0 0 0
3 5 10 11 13 14 18 20 21 24 0 0 0 0 0 0 0
3 4 5 6 11 12 15 16 18 20 21 22 0 0 0 0 0
5 6 8 11 12 13 16 23 0 0 0 0 0 0 0 0 0
2 3 5 8 9 10 12 13 16 18 21 0 0 0 0 0 0
1 3 5 8 12 13 15 16 18 19 0 0 0 0 0 0 0
2 3 8 9 10 12 14 16 18 19 23 24 0 0 0 0 0
1 2 4 6 7 9 10 12 13 15 16 18 20 22 23 24 0
3 6 8 10 12 13 14 17 19 20 24 0 0 0 0 0 0
2 4 12 13 14 16 17 18 21 24 0 0 0 0 0 0 0
1 2 3 4 6 7 8 10 16 17 19 20 0 0 0 0 0
1 3 8 10 12 14 18 19 0 0 0 0 0 0 0 0 0
4 5 9 10 14 16 17 19 0 0 0 0 0 0 0 0 0
4 5 7 8 11 14 16 22 0 0 0 0 0 0 0 0 0
4 6 8 9 10 13 15 20 21 22 24 0 0 0 0 0 0
1 2 3 7 9 11 16 17 18 22 23 24 0 0 0 0 0
2 3 6 7 9 10 11 12 13 16 17 21 23 0 0 0 0
1 2 3 8 14 15 16 20 21 0 0 0 0 0 0 0 0
1 2 5 6 8 9 11 12 13 18 19 20 21 22 24 0 0
1 2 3 4 8 9 10 12 13 14 15 18 20 22 24 0 0
1 3 4 6 7 13 14 15 20 21 22 23 0 0 0 0 0
1 2 8 10 12 13 14 15 16 18 19 21 22 23 24 0 0
1 2 3 4 7 8 11 12 13 15 16 17 18 21 22 23 24
3 5 9 11 13 14 15 16 18 19 20 22 24 0 0 0 0
2 4 6 7 9 10 11 14 15 16 18 20 21 22 0 0 0
3 4 6 7 8 9 11 12 13 16 17 19 20 21 22 23 24
1 5 7 10 11 17 21 22 23 0 0 0 0 0 0 0 0
1 2 3 4 9 11 12 14 15 17 19 20 21 22 23 0 0
2 4 10 13 16 18 21 23 24 0 0 0 0 0 0 0 0
1 3 4 5 8 9 16 18 19 22 23 24 0 0 0 0 0
1 6 15 17 19 20 21 22 23 24 0 0 0 0 0 0 0
4 8 10 13 15 16 17 21 22 23 0 0 0 0 0 0 0
1 3 5 6 7 10 12 14 15 16 17 18 19 23 24 0 0
5 8 12 14 17 18 20 21 22 23 24 0 0 0 0 0 0
2 4 7 8 10 12 14 17 18 19 20 22 23 24 0 0 0
5 6 7 8 9 11 13 14 16 17 18 22 23 24 0 0 0
1 4 5 7 8 10 11 12 13 15 16 18 19 21 23 0 0
1 6 8 9 11 12 13 17 21 22 23 0 0 0 0 0 0
5 8 9 10 11 12 16 19 20 22 23 0 0 0 0 0 0
2 4 7 8 10 15 17 20 21 25 27 28 29 30 31 32 36 37 39 40 42 46 47 0 0 0 0 0 0 0
1 3 5 6 9 14 16 17 19 20 25 26 27 28 29 31 32 34 37 38 44 0 0 0 0 0 0 0 0 0
2 3 7 8 10 11 12 14 15 16 18 20 21 25 26 27 29 30 32 33 35 37 39 42 0 0 0 0 0 0
3 7 12 17 19 20 22 23 24 29 30 32 34 35 37 38 39 41 44 46 0 0 0 0 0 0 0 0 0 0
1 3 8 9 11 12 13 14 15 22 23 28 33 36 39 42 43 45 46 48 0 0 0 0 0 0 0 0 0 0
2 4 5 10 12 13 17 18 20 24 26 28 30 34 35 40 42 45 47 0 0 0 0 0 0 0 0 0 0 0
1 3 7 9 10 17 20 23 25 26 30 32 34 35 36 42 44 45 46 0 0 0 0 0 0 0 0 0 0 0
1 3 5 7 8 10 13 14 15 16 18 20 21 23 24 27 28 29 31 32 35 39 41 43 44 45 46 47 48 0
1 2 7 8 9 10 14 16 17 22 24 25 26 28 29 33 34 35 37 39 45 47 48 0 0 0 0 0 0 0
1 2 4 6 11 14 16 17 18 20 21 22 24 26 29 31 34 36 38 41 42 44 46 48 0 0 0 0 0 0
3 4 6 7 8 9 11 12 13 23 25 26 28 32 33 34 35 36 37 45 46 47 48 0 0 0 0 0 0 0
5 6 7 9 10 12 13 14 15 16 17 18 19 21 26 28 29 31 32 35 37 42 43 44 46 47 48 0 0 0
5 6 7 11 13 14 15 17 18 19 24 26 28 29 30 31 32 33 35 38 41 45 46 47 0 0 0 0 0 0
1 6 8 11 16 18 19 21 22 23 27 29 30 31 33 34 37 42 43 44 45 0 0 0 0 0 0 0 0 0
2 4 5 6 7 8 10 12 15 17 24 27 29 30 31 32 33 34 37 40 41 42 46 0 0 0 0 0 0 0
2 5 6 7 8 12 13 14 15 16 17 19 20 22 23 25 26 27 31 32 33 34 35 38 39 41 42 45 46 48
2 4 7 8 18 19 20 22 25 26 32 35 36 37 40 41 42 43 44 45 47 0 0 0 0 0 0 0 0 0
1 4 5 7 10 11 12 14 15 16 17 19 21 25 28 29 31 32 33 34 38 39 42 43 44 45 46 0 0 0
2 3 6 9 10 15 16 18 20 21 22 28 31 33 35 37 39 40 42 44 46 48 0 0 0 0 0 0 0 0
1 4 7 8 10 11 12 17 18 20 24 27 28 29 30 33 34 35 37 40 43 44 48 0 0 0 0 0 0 0
3 4 5 8 9 11 12 14 19 24 26 27 28 30 31 32 34 35 36 37 38 40 41 43 46 47 0 0 0 0
1 2 3 4 6 8 12 17 23 24 25 28 29 30 31 32 33 34 35 36 37 39 40 41 43 44 45 47 48 0
1 2 3 5 6 9 10 13 16 17 25 26 30 31 32 35 36 37 38 39 40 41 42 43 44 45 46 47 48 0
2 5 6 9 10 11 16 17 18 19 24 25 28 29 31 32 33 35 38 39 40 42 43 44 45 0 0 0 0 0
)alist"},
}};

}  // namespace sap::catalog_data
