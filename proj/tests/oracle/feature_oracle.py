#!/usr/bin/env python3
# Copyright 2026 The aesfeat Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference implementation of the canonical 114 features.

Written from the feature definitions alone: its own bracket reader, the
syntactic patterns spelled out as tree walks, brute-force pair enumeration
for overlap. Divisions are done on exact integer counts in the same order as
the documented formulas, so the output is expected to agree bit for bit.

usage: feature_oracle.py CORPUS CONNECTIVES DICTIONARY OUT_CSV
"""

import json
import math
import sys

PUNCT = {".", ",", ":", "``", "''", "-LRB-", "-RRB-", "SYM", "#", "$"}
NOUN = {"NN", "NNS", "NNP", "NNPS"}
PROPER = {"NNP", "NNPS"}
PRONOUN = {"PRP", "PRP$", "WP", "WP$"}
ADJ = {"JJ", "JJR", "JJS"}
ADV = {"RB", "RBR", "RBS"}
VERB = {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"}
DET = {"DT", "PDT", "WDT"}
FINITE = {"VBD", "VBP", "VBZ", "MD"}
CLAUSE = {"S", "SINV", "SQ"}

KINDS = ["personal_pronoun", "demonstrative_pronoun", "reflexive_pronoun", "proper_noun",
         "possessive_determiner", "demonstrative_determiner", "indefinite_np", "definite_np",
         "other"]


def fold(s):
    return "".join(chr(ord(c) + 32) if "A" <= c <= "Z" else c for c in s)


def alphabetic(s):
    return s != "" and all(("a" <= c <= "z") or ("A" <= c <= "Z") for c in s)


def lexical(tag):
    return tag in NOUN or tag in VERB or tag in ADJ or tag in ADV


def ratio(num, den):
    return num / den if den > 0 else 0.0


# --- trees -----------------------------------------------------------------

class Node:
    def __init__(self, label, parent):
        self.label = label
        self.word = None
        self.parent = parent
        self.children = []

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def leaves(self):
        return [n for n in self.walk() if n.word is not None]

    def ancestors(self):
        a = self.parent
        while a is not None:
            yield a
            a = a.parent

    def next_sister(self):
        if self.parent is None:
            return None
        sibs = self.parent.children
        i = sibs.index(self)
        return sibs[i + 1] if i + 1 < len(sibs) else None

    def height(self):
        return 1 + max((c.height() for c in self.children), default=0)


def read_tree(text):
    toks = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def node(parent):
        nonlocal pos
        assert toks[pos] == "("
        pos += 1
        label = ""
        if toks[pos] not in "()":
            label = toks[pos]
            pos += 1
        n = Node(label, parent)
        if toks[pos] not in "()":
            n.word = toks[pos]
            pos += 1
        while toks[pos] == "(":
            n.children.append(node(n))
        assert toks[pos] == ")"
        pos += 1
        return n

    return node(None)


def words_under(n):
    return sum(1 for leaf in n.leaves() if leaf.label not in PUNCT)


def is_clause(n):
    if n.label not in CLAUSE:
        return False
    for vp in n.children:
        if vp.label != "VP":
            continue
        if any(c.label in FINITE for c in vp.children):
            return True
        for inner in vp.children:
            if inner.label == "VP" and any(c.label in FINITE for c in inner.children):
                return True
    return False


def is_complex_nominal(n):
    parent_label = n.parent.label if n.parent else None
    nxt = n.next_sister()
    if n.label == "NP" and parent_label != "NP":
        inner = {"JJ", "JJR", "JJS", "POS", "PP", "SBAR", "S", "VBG", "VBN"}
        if any(d.label in inner for d in list(n.walk())[1:]):
            return True
        kids = n.children
        for i in range(len(kids) - 2):
            if kids[i].label == "NP" and kids[i + 1].label == "," and kids[i + 2].label == "NP":
                return True
    if n.label == "SBAR" and parent_label == "VP":
        return True
    if n.label == "SBAR" and nxt is not None and nxt.label == "VP":
        return True
    if n.label == "S" and nxt is not None and nxt.label == "VP":
        for vp in n.children:
            if vp.label == "VP" and any(c.label in {"VBG", "TO"} for c in vp.children):
                return True
    return False


def syntactic_totals(trees):
    t = dict.fromkeys(["words", "clauses", "tunits", "complex_tunits", "dependent",
                       "coord", "cn", "vp", "np", "pp", "sbar", "rrc", "conjp", "wh",
                       "constituents", "subtrees", "height", "np_words", "vp_words",
                       "pp_words"], 0)
    for root in trees:
        nodes = list(root.walk())
        t["subtrees"] += len(nodes)
        t["height"] += root.height()
        t["words"] += words_under(root)
        clauses = [n for n in nodes if is_clause(n)]
        dependent = [n for n in clauses if any(a.label == "SBAR" for a in n.ancestors())]
        tunits = [n for n in clauses
                  if all(a.label in {"", "ROOT", "S", "SINV", "SQ"} for a in n.ancestors())]
        t["clauses"] += len(clauses)
        t["dependent"] += len(dependent)
        t["tunits"] += len(tunits)
        for tu in tunits:
            if any(tu in d.ancestors() for d in dependent):
                t["complex_tunits"] += 1
        for n in nodes:
            if n.children:
                t["constituents"] += 1
            if n.label in {"ADJP", "ADVP", "NP", "VP"} and any(c.label == "CC" for c in n.children):
                t["coord"] += 1
            if is_complex_nominal(n):
                t["cn"] += 1
            if n.label in {"WHNP", "WHPP", "WHADJP", "WHADVP"}:
                t["wh"] += 1
            for lab, key in (("NP", "np"), ("VP", "vp"), ("PP", "pp")):
                if n.label == lab:
                    t[key] += 1
                    t[key + "_words"] += words_under(n)
            t["sbar"] += n.label == "SBAR"
            t["rrc"] += n.label == "RRC"
            t["conjp"] += n.label == "CONJP"
    return t


def syn_features(trees):
    c = syntactic_totals(trees)
    s = len(trees)
    return [
        ratio(c["words"], s), ratio(c["words"], c["clauses"]), ratio(c["words"], c["tunits"]),
        ratio(c["cn"], c["clauses"]), ratio(c["cn"], c["tunits"]),
        ratio(c["complex_tunits"], c["tunits"]),
        ratio(c["coord"], c["clauses"]), ratio(c["coord"], c["tunits"]),
        ratio(c["dependent"], c["clauses"]), ratio(c["dependent"], c["tunits"]),
        ratio(c["clauses"], c["tunits"]), ratio(c["vp"], c["tunits"]),
        ratio(c["tunits"], s), ratio(c["clauses"], s),
        ratio(c["height"], s), float(s), ratio(c["constituents"], s), ratio(c["conjp"], s),
        ratio(c["np_words"], c["np"]), ratio(c["np"], s),
        ratio(c["pp_words"], c["pp"]), ratio(c["pp"], s),
        ratio(c["rrc"], s), ratio(c["sbar"], s), ratio(c["subtrees"], s),
        ratio(c["vp_words"], c["vp"]), ratio(c["vp"], s), ratio(c["wh"], s),
    ]


# --- lexical ---------------------------------------------------------------

def mtld_pass(tokens, thr=0.72):
    factors = 0.0
    seen, count = set(), 0
    for tok in tokens:
        seen.add(tok)
        count += 1
        if len(seen) / count < thr:
            factors += 1.0
            seen, count = set(), 0
    if count:
        factors += (1.0 - len(seen) / count) / (1.0 - thr)
    return factors, (len(tokens) / factors if factors > 0 else 0.0)


def word_features(forms):
    n, t = len(forms), len(set(forms))
    out = [t / n, t / math.sqrt(2.0 * n), t / math.sqrt(n),
           math.log(t) / math.log(n) if n > 1 else 0.0]
    ff, fwd = mtld_pass(forms)
    bf, bwd = mtld_pass(forms[::-1])
    out.append(0.0 if ff == 0 or bf == 0 else (fwd + bwd) / 2.0)
    return out


def pos_features(words):
    n = len(words)
    tests = [
        lambda p: p in NOUN, lambda p: p in PROPER, lambda p: p in PRONOUN,
        lambda p: p == "PRP", lambda p: p in ADJ, lambda p: p in ADV, lambda p: p == "CC",
        lambda p: p == "UH", lambda p: p in DET, lambda p: p in {"IN", "TO"},
        lambda p: p in VERB, lambda p: p in {"WP", "WP$"}, lambda p: p == "VBD",
        lambda p: p == "VBG", lambda p: p == "VBN", lambda p: p == "VBP",
        lambda p: p == "VBZ", lambda p: p == "MD",
    ]
    out = [sum(1 for w in words if f(w["pos"])) / n for f in tests]
    lex = sum(1 for w in words if lexical(w["pos"]))
    nouns = sum(1 for w in words if w["pos"] in NOUN)
    adjs = sum(1 for w in words if w["pos"] in ADJ)
    advs = sum(1 for w in words if w["pos"] in ADV)
    verbs = [w for w in words if w["pos"] in VERB]
    vn = len(verbs)
    vt = len({fold(w.get("lemma") or w["form"]) for w in verbs})
    adj_var, adv_var = ratio(adjs, lex), ratio(advs, lex)
    out += [
        adj_var, adv_var, vt / math.sqrt(2.0 * vn) if vn else 0.0, adj_var + adv_var,
        ratio(nouns, lex), ratio(float(vt) * float(vt), vn), ratio(vt, vn), ratio(vt, lex),
        ratio(lex, n),
    ]
    return out


# --- discourse -------------------------------------------------------------

def fallback_stem(form):
    f = fold(form)
    if not alphabetic(f):
        return f
    for suffix in ("ing", "es", "ed", "ly", "s"):
        if f.endswith(suffix):
            return f[: -len(suffix)] if len(f) - len(suffix) >= 3 else f
    return f


def stem_of(tok):
    return tok["stem"] if tok.get("stem") else fallback_stem(tok["form"])


def local_global(sets):
    n = len(sets)
    if n < 2:
        return 0.0, 0.0
    adjacent = sum(1 for i in range(n - 1) if sets[i] & sets[i + 1])
    anyp = sum(1 for i in range(n) for j in range(i + 1, n) if sets[i] & sets[j])
    return adjacent / (n - 1), anyp / (n * (n - 1) // 2)


def overlap_features(doc):
    flavours = {"content": [], "noun": [], "stem": [], "argument": []}
    for s in doc["sentences"]:
        toks = s["tokens"]
        flavours["content"].append({fold(t["form"]) for t in toks if lexical(t["pos"])})
        flavours["noun"].append({fold(t["form"]) for t in toks if t["pos"] in NOUN})
        flavours["stem"].append({fold(stem_of(t)) for t in toks if lexical(t["pos"])})
        flavours["argument"].append({fold(stem_of(t)) for t in toks if t["pos"] in NOUN}
                                    | {fold(t["form"]) for t in toks if t["pos"] == "PRP"})
    out = []
    for key in ("content", "noun", "stem", "argument"):
        out += local_global(flavours[key])
    return out


def refex_features(doc):
    words = [t for s in doc["sentences"] for t in s["tokens"] if t["pos"] not in PUNCT]
    w, ns = len(words), len(doc["sentences"])
    count = lambda f: sum(1 for t in words if f(t))
    definite = count(lambda t: t["pos"] == "DT" and fold(t["form"]) == "the")
    pron = count(lambda t: t["pos"] in PRONOUN)
    pers = count(lambda t: t["pos"] == "PRP")
    poss = count(lambda t: t["pos"] in {"PRP$", "WP$"})
    nouns = count(lambda t: t["pos"] in NOUN)
    proper = count(lambda t: t["pos"] in PROPER)
    return [definite / w, definite / ns, pron / w, pron / ns, pers / w, pers / ns,
            poss / w, poss / ns, ratio(pron, nouns), ratio(proper, nouns)]


def load_lexicon(path):
    lex = {}
    for line in open(path, encoding="utf-8"):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        form, sense = line.split("\t")
        lex[tuple(fold(w) for w in form.split())] = sense
    return lex


def covering_node(root, first, last):
    node = first.parent
    while node is not None and last not in list(node.walk()):
        node = node.parent
    return node


def discourse_usage(node, first):
    if node is None:
        return False
    if node.label in {"S", "SBAR", "PRN"}:
        return True
    if node.label == "ADVP" and node.parent is not None and node.parent.label in {"S", "SBAR"}:
        return True
    if first.label == "CC":
        return sum(1 for d in list(node.walk())[1:] if d.label == "S") >= 2
    return False


def connective_features(doc, lex):
    longest = max(len(k) for k in lex)
    senses = {"Expansion": 0, "Contingency": 0, "Comparison": 0, "Temporal": 0}
    non = 0
    for s in doc["sentences"]:
        if "connectives" in s:
            for a in s["connectives"]:
                if a["usage"] == "discourse":
                    senses[a["sense"]] += 1
                else:
                    non += 1
            continue
        toks = s["tokens"]
        root = read_tree(s["parse"])
        leaves = root.leaves()
        i = 0
        while i < len(toks):
            hit = None
            for length in range(min(longest, len(toks) - i), 0, -1):
                key = tuple(fold(t["form"]) for t in toks[i:i + length])
                if key in lex:
                    hit = (length, lex[key])
                    break
            if hit is None:
                i += 1
                continue
            length, sense = hit
            first, last = leaves[i], leaves[i + length - 1]
            if discourse_usage(covering_node(root, first, last), first):
                senses[sense] += 1
            else:
                non += 1
            i += length
    n = len(doc["sentences"])
    exp, cont = ratio(senses["Expansion"], n), ratio(senses["Contingency"], n)
    comp, temp = ratio(senses["Comparison"], n), ratio(senses["Temporal"], n)
    disc = exp + cont + comp + temp
    nd = ratio(non, n)
    return [disc, nd, disc + nd, exp, cont, comp, temp]


def entity_transitions(trees):
    roles = "SOXN"
    grid = {}
    for si, root in enumerate(trees):
        for np_node in root.walk():
            if np_node.label != "NP":
                continue
            heads = [c for c in np_node.children if c.word is not None and c.label in NOUN]
            if not heads:
                continue
            p = np_node.parent
            if p is not None and p.label == "S" and np_node.next_sister() is not None \
                    and np_node.next_sister().label == "VP":
                role = "S"
            elif p is not None and p.label == "VP":
                role = "O"
            else:
                role = "X"
            row = grid.setdefault(fold(heads[-1].word), ["N"] * len(trees))
            if roles.index(role) < roles.index(row[si]):
                row[si] = role
    counts = {a + b: 0 for a in roles for b in roles}
    total = 0
    for row in grid.values():
        for a, b in zip(row, row[1:]):
            counts[a + b] += 1
            total += 1
    return [ratio(counts[a + b], total) for a in roles for b in roles]


def mention_kind(doc, m):
    if m.get("kind"):
        return m["kind"]
    sents = doc["sentences"]
    if m["sentence"] >= len(sents):
        return "other"
    toks = sents[m["sentence"]]["tokens"]
    if m["start"] >= len(toks) or m["end"] >= len(toks):
        return "other"
    first = toks[m["start"]]
    f = fold(first["form"])
    single = m["start"] == m["end"]
    if first["pos"] == "PRP":
        return "reflexive_pronoun" if f.endswith("self") or f.endswith("selves") \
            else "personal_pronoun"
    if first["pos"] == "PRP$":
        return "possessive_determiner"
    if f in {"this", "that", "these", "those"} and (first["pos"] == "DT" or single):
        return "demonstrative_pronoun" if single else "demonstrative_determiner"
    if f in {"a", "an"}:
        return "indefinite_np"
    if f == "the":
        return "definite_np"
    if first["pos"] in PROPER:
        return "proper_noun"
    return "other"


def chain_features(doc):
    counts = dict.fromkeys(KINDS, 0)
    total = 0
    for chain in doc.get("chains") or []:
        for m in chain["mentions"]:
            counts[mention_kind(doc, m)] += 1
            total += 1
    return [ratio(counts[k], total) for k in KINDS[:-1]]


# --- errors ----------------------------------------------------------------

def fallback_errors(doc, dictionary):
    out = []
    for s in doc["sentences"]:
        toks = s["tokens"]
        for i, t in enumerate(toks):
            if not alphabetic(t["form"]):
                continue
            f = fold(t["form"])
            if t["pos"] not in PROPER and f not in dictionary:
                out.append("spelling")
            if i + 1 < len(toks) and alphabetic(toks[i + 1]["form"]):
                nxt = fold(toks[i + 1]["form"])
                if nxt == f:
                    out.append("non-spelling")
                vowel = nxt[0] in "aeiou"
                if (f == "a" and vowel) or (f == "an" and not vowel):
                    out.append("non-spelling")
    return out


def error_features(doc, dictionary):
    if "errors" in doc:
        kinds = [e["kind"] for e in doc["errors"]]
    else:
        kinds = fallback_errors(doc, dictionary)
    n = len(doc["sentences"])
    sp = kinds.count("spelling")
    nsp = len(kinds) - sp
    a, b = sp / n, nsp / n
    return [a, b, a + b, ratio(sp, sp + nsp)]


# --- assembly --------------------------------------------------------------

def features(doc, lex, dictionary):
    words = [t for s in doc["sentences"] for t in s["tokens"] if t["pos"] not in PUNCT]
    forms = [fold(t["form"]) for t in words]
    trees = [read_tree(s["parse"]) for s in doc["sentences"]]
    return ([float(len(forms))] + word_features(forms) + pos_features(words)
            + syn_features(trees) + overlap_features(doc) + refex_features(doc)
            + connective_features(doc, lex) + entity_transitions(trees)
            + chain_features(doc) + error_features(doc, dictionary))


FEATURE_NAMES = (
    ["docLen", "WORD_TTR", "WORD_CorrectedTTR", "WORD_RootTTR", "WORD_BilogTTR", "WORD_MTLD"]
    + ["POS_" + n for n in (
        "numNouns numProperNouns numPronouns numPerPronouns numAdjectives numAdverbs "
        "numConjunctions numInterjections numDeterminers numPrepositions numVerbs "
        "numWhPronouns numVerbsVBD numVerbsVBG numVerbsVBN numVerbsVBP numVerbsVBZ "
        "numModalVerbs adjectiveVariation adverbVariation correctedVerbVariation1 "
        "modifierVariation nounVar squaredVerbVar1 verbVar1 verbVar2 numLexicalWords").split()]
    + ["SYN_" + n for n in (
        "avgSentenceLength MeanLengthofClauses MeanLengthofTunits ComplexNominalsPerClause "
        "CNPerTunit ComplexTunitRatio CoordinatePhrasesPerClause CoordPerTunit "
        "DependentClauseRatio DependentClausesPerTunit TunitComplexityRatio VPPerTunit "
        "numTunitsPerSen numClausesPerSen avgParseTreeHeightPerSen numSentences "
        "numConstitutentsPerSen numConjPPerSen avgNPSize numNPsPerSen numPPSize numPPsPerSen "
        "numRRCsPerSen numSBARsPerSen numSubtreesPerSen numVPSize numVPsPerSen "
        "WhPhrasesPerSen").split()]
    + ["DISC_" + scope + kind + "Overlap"
       for kind in ("ContentWord", "Noun", "Stem", "Argument") for scope in ("local", "global")]
    + ["DISC_" + n for n in (
        "defArticlesPerWord defArticlesPerSen pronounsPerWord pronounsPerSen "
        "perPronounsPerWord perPronounsPerSen possPronounsPerWord possPronounsPerSen "
        "pronounsPerNoun properNounsPerNoun discConnectivesPerSen nonDiscConnectivesPerSen "
        "allConnectivesPerSen expansionPerSen contingencyPerSen comparisonPerSen "
        "temporalPerSen").split()]
    + ["DISC_entTrans_" + a + b for a in "SOXN" for b in "SOXN"]
    + ["DISC_chain" + n for n in (
        "PersonalPronouns DemonstrativePronouns ReflexivePronouns ProperNouns "
        "PossessiveDeterminers DemonstrativeDeterminers IndefiniteNPs DefiniteNPs").split()]
    + ["ERR_spellingPerSen", "ERR_nonSpellingPerSen", "ERR_allErrorsPerSen",
       "ERR_spellingShare"]
)


def fmt(v):
    return "%.17g" % v


def main(corpus, connectives, dictionary_path, out_path):
    docs = [json.loads(line) for line in open(corpus, encoding="utf-8") if line.strip()]
    docs.sort(key=lambda d: d["id"])
    lex = load_lexicon(connectives)
    dictionary = {fold(w.strip()) for w in open(dictionary_path, encoding="utf-8") if w.strip()}
    prompts = sorted({d.get("prompt", "") for d in docs})
    l1s = sorted({d.get("l1", "") for d in docs})
    header = (["id"] + FEATURE_NAMES + ["prompt=" + p for p in prompts]
              + ["l1=" + x for x in l1s] + ["label", "score"])
    assert len(FEATURE_NAMES) == 114
    with open(out_path, "w", encoding="utf-8", newline="") as out:
        out.write(",".join(header) + "\n")
        for d in docs:
            vals = features(d, lex, dictionary)
            cells = [d["id"]] + [fmt(v) for v in vals]
            cells += ["1" if d.get("prompt", "") == p else "0" for p in prompts]
            cells += ["1" if d.get("l1", "") == x else "0" for x in l1s]
            cells += [d.get("label", ""), fmt(d["score"]) if "score" in d else ""]
            out.write(",".join(cells) + "\n")


if __name__ == "__main__":
    if len(sys.argv) != 5:
        sys.exit(__doc__)
    main(*sys.argv[1:])
