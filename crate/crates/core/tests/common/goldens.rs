/// Scripted commands with their exit code and exact output: stdout on
/// success, stderr on failure.
pub const GOLDENS: &[(&str, i32, &str)] = &[
    ("ord w (+) w", 0, "w*2"),
    ("ord 1 + w", 0, "w"),
    ("ord (w+1)*(w+1)", 0, "w^2 + w + 1"),
    ("ord (w+1)(x)(w+1)", 0, "w^2 + w*2 + 1"),
    ("ord 2^(w+1)", 0, "w*2"),
    ("ord w^(w+1)*3 + w^2", 0, "w^(w + 1)*3 + w^2"),
    ("nf w*2 + 1", 0, "2^(w + 1) + 2^(0)"),
    ("nf w^2 + 5", 0, "2^(w*2) + 2^(2) + 2^(0)"),
    ("code w", 0, "{w}"),
    ("code w*3 + 6", 0, "{w + 1, w, 2, 1}"),
    ("chain {0, 1, w}", 0, "0 {}\n1 {0}\n3 {1, 0}\nw + 3 {w, 1, 0}"),
    ("cmp 2*P(w)-3 P(w)", 0, "GT, witness θ=3"),
    ("cmp P(w) P(w)", 0, "EQ, witness θ=0"),
    ("cmp P(w*2) 1000*P(w)", 0, "GT, witness θ=w*1023"),
    ("cmp -P(w), -1000", 0, "LT, witness θ=1023"),
    ("cmp finset([0,w)) P(w)", 0, "GT, heuristic over 20 samples"),
    ("num ([0,w) >< [0,w))", 0, "P(w*2)"),
    ("num [0,w) | [w*2, w*2+5)", 0, "P(w) + 5"),
    ("num [0,w) \\ {0, 1, 2}", 0, "P(w) - 3"),
    ("num [0,w):2 + @3:7", 0, "2*P(w) + 5"),
    ("count [0,w) at {w,3,1}", 0, "4"),
    ("realize 2*P(w)-3", 0, "[3, w*2)"),
    ("realize P(w*2) - P(w)", 0, "[w, w^2)"),
    ("diff [0,w), [0,w*2)", 0, "[w^2, w^2 + w)"),
    ("partition card on {0,1,2}", 0, "universe: {2, 1, 0}\nsource: card\nzero pairs: 0\nverdict: homogeneous, color 1, 8 codes\nwitness: {0, 1, 2, 3, 4, 5, 6, 7}"),
    ("partition parity on {0,1}", 0, "universe: {1, 0}\nsource: parity\nzero pairs: 2\nverdict: 0-chain at scale {1, 0}\nwitness: 1 -> 3"),
    ("fip C(5) & D(1) & D(w, 3)", 0, "FOUND w*7 + 7 {w + 2, w + 1, w, 2, 1, 0}"),
    ("fip Q([0,w), {0,1,2,3,4,5,6,7,8,9}) & C(1) in {0,1,2,3,w}", 0, "FOUND 11 {3, 1, 0}"),
    ("eval P(w) at {w,3,1}", 0, "4"),
    ("eval finmap([0,3), [0,2)) at {1,0}", 0, "27"),
    ("ord w +", 2, "error: syntax error at column 8: expected an ordinal, found end of input"),
    ("num [3,3)", 4, "error: precondition violated: empty interval [3, 3)"),
    ("chain {0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23,24,25}", 3, "error: budget exceeded: code space: 26 exponents exceed the cap of 24"),
];
