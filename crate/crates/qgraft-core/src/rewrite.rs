//! Degree-bounded Diamond-Lemma engine: monomial orders, oriented
//! reduction systems, overlap-ambiguity resolution, bounded completion,
//! normal forms and graded dimension counts, plus a small relation-file
//! DSL.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use crate::braided::{NCPolynomial, Word};
use crate::qscalar::Scalar;
use crate::{QError, Result};

/// Degree-lexicographic order induced by a (possibly partial) rank
/// assignment on generators. Words of equal degree are compared letter by
/// letter; two words are incomparable when the first differing letters are
/// not both ranked.
#[derive(Clone, Debug)]
pub struct MonomialOrder {
    ranks: Vec<Option<usize>>,
}

impl MonomialOrder {
    /// Total order by generator index (the composite order: earlier index
    /// tuples are smaller).
    pub fn total(num_generators: usize) -> Self {
        MonomialOrder { ranks: (0..num_generators).map(Some).collect() }
    }

    /// Order from an ascending chain of generator indices; generators not
    /// listed stay unranked, making the order partial.
    pub fn from_chain(num_generators: usize, chain: &[u16]) -> Self {
        let mut ranks = vec![None; num_generators];
        for (pos, &g) in chain.iter().enumerate() {
            ranks[g as usize] = Some(pos);
        }
        MonomialOrder { ranks }
    }

    pub fn num_generators(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_total(&self) -> bool {
        self.ranks.iter().all(Option::is_some)
    }

    fn cmp_letters(&self, a: u16, b: u16) -> Option<Ordering> {
        if a == b {
            return Some(Ordering::Equal);
        }
        match (self.ranks[a as usize], self.ranks[b as usize]) {
            (Some(x), Some(y)) => Some(x.cmp(&y)),
            _ => None,
        }
    }

    /// Degree-lexicographic comparison; None when incomparable.
    pub fn cmp_words(&self, u: &[u16], v: &[u16]) -> Option<Ordering> {
        match u.len().cmp(&v.len()) {
            Ordering::Equal => {}
            other => return Some(other),
        }
        for (&a, &b) in u.iter().zip(v) {
            match self.cmp_letters(a, b)? {
                Ordering::Equal => continue,
                other => return Some(other),
            }
        }
        Some(Ordering::Equal)
    }

    /// The unique order-maximal word of p, comparable with every other
    /// word of p.
    pub fn leading_word(&self, p: &NCPolynomial) -> Result<Word> {
        let words: Vec<&Word> = p.terms().map(|(w, _)| w).collect();
        if words.is_empty() {
            return Err(QError::NoLeadingTerm("zero polynomial".into()));
        }
        let mut maximal: Option<&Word> = None;
        for w in &words {
            let dominated = words.iter().any(|v| {
                self.cmp_words(v, w).map(|o| o == Ordering::Greater).unwrap_or(false)
            });
            if !dominated {
                match maximal {
                    None => maximal = Some(w),
                    Some(_) => {
                        return Err(QError::NoLeadingTerm(format!(
                            "two maximal monomials in {:?}",
                            words
                        )))
                    }
                }
            }
        }
        let m = maximal.ok_or_else(|| {
            QError::NoLeadingTerm("no maximal monomial (order cycle)".into())
        })?;
        for w in &words {
            if self.cmp_words(m, w).is_none() {
                return Err(QError::NoLeadingTerm(format!(
                    "maximal monomial {:?} incomparable with {:?}",
                    m, w
                )));
            }
        }
        Ok((*m).clone())
    }
}

/// One oriented rule lhs → rhs; every monomial of rhs is strictly smaller
/// than lhs and the lhs coefficient is normalized to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPolynomial,
}

impl Rule {
    /// The relation lhs − rhs this rule rewrites to zero.
    pub fn as_relation(&self) -> NCPolynomial {
        NCPolynomial::from_term(self.lhs.clone(), Scalar::one()).sub(&self.rhs)
    }
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub order: MonomialOrder,
    pub rules: Vec<Rule>,
    pub degree_bound: usize,
}

fn occurrences(word: &[u16], lhs: &[u16]) -> Vec<usize> {
    if lhs.len() > word.len() {
        return Vec::new();
    }
    (0..=word.len() - lhs.len()).filter(|&p| &word[p..p + lhs.len()] == lhs).collect()
}

/// Replace the occurrence of rules[rule].lhs at `pos` inside `word`,
/// returning coeff · prefix·rhs·suffix.
fn apply_at(sys: &RewriteSystem, word: &[u16], coeff: &Scalar, rule: usize, pos: usize) -> NCPolynomial {
    let lhs = &sys.rules[rule].lhs;
    sys.rules[rule]
        .rhs
        .framed(&word[..pos], &word[pos + lhs.len()..])
        .scale(coeff)
}

fn first_reduction(sys: &RewriteSystem, p: &NCPolynomial) -> Option<(Word, usize, usize)> {
    for (w, _) in p.terms() {
        for (ri, rule) in sys.rules.iter().enumerate() {
            if let Some(&pos) = occurrences(w, &rule.lhs).first() {
                return Some((w.clone(), ri, pos));
            }
        }
    }
    None
}

/// Deterministic normal form: no monomial of the result contains any rule
/// lhs; the result is congruent to p modulo the ideal of the rules.
pub fn normal_form(sys: &RewriteSystem, p: &NCPolynomial) -> NCPolynomial {
    let mut cur = p.clone();
    while let Some((w, ri, pos)) = first_reduction(sys, &cur) {
        let c = cur.coeff(&w);
        cur.add_term(w.clone(), -&c);
        cur = cur.add(&apply_at(sys, &w, &c, ri, pos));
    }
    cur
}

/// Normal form along a randomized reduction path; agrees with
/// [`normal_form`] exactly when the system is confluent.
pub fn normal_form_randomized<R: Rng>(
    sys: &RewriteSystem,
    p: &NCPolynomial,
    rng: &mut R,
) -> NCPolynomial {
    let mut cur = p.clone();
    loop {
        let mut sites: Vec<(Word, usize, usize)> = Vec::new();
        for (w, _) in cur.terms() {
            for (ri, rule) in sys.rules.iter().enumerate() {
                for pos in occurrences(w, &rule.lhs) {
                    sites.push((w.clone(), ri, pos));
                }
            }
        }
        if sites.is_empty() {
            return cur;
        }
        let (w, ri, pos) = sites[rng.gen_range(0..sites.len())].clone();
        let c = cur.coeff(&w);
        if c.is_zero() {
            continue;
        }
        cur.add_term(w.clone(), -&c);
        cur = cur.add(&apply_at(sys, &w, &c, ri, pos));
    }
}

/// Orient homogeneous relations into an inter-reduced rewrite system:
/// each surviving relation is solved for its unique leading word, with
/// every rhs fully reduced and no lhs containing another lhs as a subword.
pub fn orient(
    relations: &[NCPolynomial],
    order: MonomialOrder,
    degree_bound: usize,
) -> Result<RewriteSystem> {
    let mut sys = RewriteSystem { order, rules: Vec::new(), degree_bound };
    let mut queue: VecDeque<NCPolynomial> = relations.iter().cloned().collect();
    while let Some(p) = queue.pop_front() {
        let reduced = normal_form(&sys, &p);
        if reduced.is_zero() {
            continue;
        }
        let lhs = sys.order.leading_word(&reduced)?;
        let c = reduced.coeff(&lhs);
        let monic = reduced.scale(&c.inv().expect("leading coefficient nonzero"));
        let rhs = NCPolynomial::from_term(lhs.clone(), Scalar::one()).sub(&monic);
        sys.rules.push(Rule { lhs: lhs.clone(), rhs });
        // re-queue rules whose lhs became reducible; renormalize the rest
        let mut keep = Vec::new();
        let rules = std::mem::take(&mut sys.rules);
        for (i, rule) in rules.iter().enumerate() {
            let overshadowed = rules.iter().enumerate().any(|(j, other)| {
                i != j
                    && other.lhs.len() <= rule.lhs.len()
                    && !occurrences(&rule.lhs, &other.lhs).is_empty()
                    && (other.lhs.len() < rule.lhs.len() || j < i)
            });
            if overshadowed {
                queue.push_back(rule.as_relation());
            } else {
                keep.push(rule.clone());
            }
        }
        sys.rules = keep;
        // reduce each rhs against the other rules
        for i in 0..sys.rules.len() {
            let rule = sys.rules[i].clone();
            let mut others = sys.clone();
            others.rules.remove(i);
            sys.rules[i].rhs = normal_form(&others, &rule.rhs);
        }
    }
    sys.rules.sort_by(|a, b| (a.lhs.len(), &a.lhs).cmp(&(b.lhs.len(), &b.lhs)));
    Ok(sys)
}

/// An ambiguity between two rules: either a proper overlap
/// (lhs_left = A·B, lhs_right = B·C) or an inclusion
/// (lhs_right = A·lhs_left·C as a strict subword).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Overlap {
    pub left: usize,
    pub right: usize,
    pub a: Word,
    pub b: Word,
    pub c: Word,
    pub inclusion: bool,
}

impl Overlap {
    /// The ambiguous word both reduction paths start from.
    pub fn word(&self) -> Word {
        let mut w = self.a.clone();
        w.extend_from_slice(&self.b);
        w.extend_from_slice(&self.c);
        w
    }

    pub fn degree(&self) -> usize {
        self.a.len() + self.b.len() + self.c.len()
    }
}

/// All overlap and inclusion ambiguities of the system, deduplicated.
pub fn overlaps(sys: &RewriteSystem) -> Vec<Overlap> {
    let mut out = BTreeSet::new();
    for (i, ri) in sys.rules.iter().enumerate() {
        for (j, rj) in sys.rules.iter().enumerate() {
            // proper overlaps: a suffix of lhs_i equals a prefix of lhs_j
            let (li, lj) = (ri.lhs.len(), rj.lhs.len());
            for t in 1..li.min(lj) {
                if ri.lhs[li - t..] == rj.lhs[..t] {
                    out.insert(Overlap {
                        left: i,
                        right: j,
                        a: ri.lhs[..li - t].to_vec(),
                        b: ri.lhs[li - t..].to_vec(),
                        c: rj.lhs[t..].to_vec(),
                        inclusion: false,
                    });
                }
            }
            // inclusions: lhs_i sits strictly inside lhs_j
            if i != j && li < lj {
                for pos in occurrences(&rj.lhs, &ri.lhs) {
                    out.insert(Overlap {
                        left: i,
                        right: j,
                        a: rj.lhs[..pos].to_vec(),
                        b: ri.lhs.clone(),
                        c: rj.lhs[pos + li..].to_vec(),
                        inclusion: true,
                    });
                }
            }
        }
    }
    out.into_iter().collect()
}

pub struct Resolution {
    pub resolvable: bool,
    pub discrepancy: NCPolynomial,
}

/// Reduce the ambiguous word along both paths: resolvable iff the normal
/// forms agree; otherwise the difference is a new element of the ideal.
pub fn resolve(sys: &RewriteSystem, overlap: &Overlap) -> Resolution {
    let word = overlap.word();
    let one = Scalar::one();
    let (p1, p2) = if overlap.inclusion {
        // inner rule at the inclusion point vs outer rule on the whole word
        (
            apply_at(sys, &word, &one, overlap.left, overlap.a.len()),
            apply_at(sys, &word, &one, overlap.right, 0),
        )
    } else {
        (
            apply_at(sys, &word, &one, overlap.left, 0),
            apply_at(sys, &word, &one, overlap.right, overlap.a.len()),
        )
    };
    let discrepancy = normal_form(sys, &p1).sub(&normal_form(sys, &p2));
    Resolution { resolvable: discrepancy.is_zero(), discrepancy }
}

/// Bounded completion: resolve every ambiguity of degree ≤ degree_bound,
/// orienting nonzero discrepancies as new rules until a fixpoint. Returns
/// the confluent system and the log of discrepancies that were added.
pub fn complete_with_log(sys: &RewriteSystem) -> Result<(RewriteSystem, Vec<NCPolynomial>)> {
    let mut cur = sys.clone();
    let mut log = Vec::new();
    loop {
        let mut discrepancies = Vec::new();
        for ov in overlaps(&cur) {
            if ov.degree() > cur.degree_bound {
                continue;
            }
            let res = resolve(&cur, &ov);
            if !res.resolvable {
                discrepancies.push(res.discrepancy);
            }
        }
        if discrepancies.is_empty() {
            return Ok((cur, log));
        }
        for d in &discrepancies {
            let lead = cur.order.leading_word(d)?;
            if lead.len() > cur.degree_bound {
                return Err(QError::BoundExceeded(format!(
                    "discrepancy leading word of degree {}",
                    lead.len()
                )));
            }
        }
        log.extend(discrepancies.iter().cloned());
        let mut relations: Vec<NCPolynomial> =
            cur.rules.iter().map(Rule::as_relation).collect();
        relations.extend(discrepancies);
        cur = orient(&relations, cur.order.clone(), cur.degree_bound)?;
    }
}

/// Bounded completion; see [`complete_with_log`].
pub fn complete(sys: &RewriteSystem) -> Result<RewriteSystem> {
    complete_with_log(sys).map(|(s, _)| s)
}

/// Nonzero discrepancies of all ambiguities within the degree bound; empty
/// iff the system is confluent up to the bound.
pub fn confluence_failures(sys: &RewriteSystem) -> Vec<(Overlap, NCPolynomial)> {
    overlaps(sys)
        .into_iter()
        .filter(|ov| ov.degree() <= sys.degree_bound)
        .filter_map(|ov| {
            let res = resolve(sys, &ov);
            (!res.resolvable).then(|| (ov, res.discrepancy))
        })
        .collect()
}

/// All degree-d words containing no rule lhs as a subword, in generator
/// index order.
pub fn normal_words(sys: &RewriteSystem, degree: usize) -> Vec<Word> {
    let n = sys.order.num_generators() as u16;
    let mut out = Vec::new();
    let mut stack: Vec<Word> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() == degree {
            out.push(w);
            continue;
        }
        // descending push so the stack pops in ascending order
        for g in (0..n).rev() {
            let mut next = w.clone();
            next.push(g);
            let clean = sys
                .rules
                .iter()
                .all(|r| r.lhs.len() > next.len() || next[next.len() - r.lhs.len()..] != r.lhs[..]);
            if clean {
                stack.push(next);
            }
        }
    }
    out
}

/// Number of normal-form words per degree 0..=up_to: the graded dimensions
/// of the quotient once the system is confluent through that degree.
pub fn hilbert_dims(sys: &RewriteSystem, up_to: usize) -> Vec<usize> {
    (0..=up_to).map(|d| normal_words(sys, d).len()).collect()
}

/// Parsed relation file: named generators, order, homogeneous relations.
#[derive(Clone, Debug)]
pub struct ParsedSystem {
    pub generators: Vec<String>,
    pub order: MonomialOrder,
    pub relations: Vec<NCPolynomial>,
}

#[derive(Clone, Debug, PartialEq)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize_dsl(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        if ch == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if ch == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        let start = (line, col);
        if ch.is_alphanumeric() || ch == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            tokens.push(Token { text: word, line: start.0, col: start.1 });
        } else if "<;+-*/^()".contains(ch) {
            chars.next();
            col += 1;
            tokens.push(Token { text: ch.to_string(), line: start.0, col: start.1 });
        } else {
            return Err(QError::Syntax {
                line,
                col,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(tokens)
}

fn syntax_err(tok: Option<&Token>, fallback: (usize, usize), msg: &str) -> QError {
    let (line, col) = tok.map(|t| (t.line, t.col)).unwrap_or(fallback);
    QError::Syntax { line, col, msg: msg.into() }
}

/// Parse the relation-file DSL:
/// `gens` declares generators, `order` an ascending chain (subset chains
/// give a partial order), `rel` a noncommutative polynomial that must
/// vanish. Scalars use the q/s scalar syntax.
pub fn parse_dsl(text: &str) -> Result<ParsedSystem> {
    let tokens = tokenize_dsl(text)?;
    let mut gens: Vec<String> = Vec::new();
    let mut chain: Option<Vec<u16>> = None;
    let mut relations = Vec::new();
    let last_pos = tokens.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));

    let mut stmts: Vec<&[Token]> = Vec::new();
    let mut start = 0usize;
    for (i, t) in tokens.iter().enumerate() {
        if t.text == ";" {
            stmts.push(&tokens[start..i]);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        return Err(syntax_err(tokens.get(start), last_pos, "statement not terminated by `;`"));
    }

    let lookup = |name: &Token, gens: &[String]| -> Result<u16> {
        gens.iter().position(|g| g == &name.text).map(|i| i as u16).ok_or_else(|| {
            QError::UnknownGenerator { line: name.line, col: name.col, name: name.text.clone() }
        })
    };

    for stmt in stmts {
        let Some(head) = stmt.first() else {
            continue;
        };
        match head.text.as_str() {
            "gens" => {
                if stmt.len() < 2 {
                    return Err(syntax_err(Some(head), last_pos, "gens needs at least one name"));
                }
                for t in &stmt[1..] {
                    if !t.chars_start_ident() {
                        return Err(syntax_err(Some(t), last_pos, "generator name expected"));
                    }
                    if gens.contains(&t.text) {
                        return Err(syntax_err(Some(t), last_pos, "duplicate generator"));
                    }
                    gens.push(t.text.clone());
                }
            }
            "order" => {
                let mut seq = Vec::new();
                let mut expect_name = true;
                for t in &stmt[1..] {
                    if expect_name {
                        seq.push(lookup(t, &gens)?);
                    } else if t.text != "<" {
                        return Err(syntax_err(Some(t), last_pos, "expected `<`"));
                    }
                    expect_name = !expect_name;
                }
                if seq.len() < 2 || expect_name {
                    return Err(syntax_err(Some(head), last_pos, "order needs a chain a < b < …"));
                }
                chain = Some(seq);
            }
            "rel" => {
                relations.push(parse_rel(&stmt[1..], &gens, last_pos)?);
            }
            _ => {
                return Err(syntax_err(Some(head), last_pos, "expected gens, order or rel"));
            }
        }
    }

    let order = match chain {
        Some(seq) => MonomialOrder::from_chain(gens.len(), &seq),
        None => MonomialOrder::total(gens.len()),
    };
    Ok(ParsedSystem { generators: gens, order, relations })
}

trait IdentStart {
    fn chars_start_ident(&self) -> bool;
}

impl IdentStart for Token {
    fn chars_start_ident(&self) -> bool {
        self.text.chars().next().map(|c| c.is_alphabetic() || c == '_').unwrap_or(false)
    }
}

/// One `rel` body: signed terms split at top-level + and −, each term a
/// `*`-separated chain of an optional scalar prefix and generator names.
fn parse_rel(toks: &[Token], gens: &[String], last_pos: (usize, usize)) -> Result<NCPolynomial> {
    if toks.is_empty() {
        return Err(syntax_err(None, last_pos, "empty relation"));
    }
    let mut poly = NCPolynomial::zero();
    let mut term: Vec<&Token> = Vec::new();
    let mut sign = Scalar::one();
    let mut depth = 0i32;
    let mut flush = |term: &mut Vec<&Token>, sign: &Scalar| -> Result<()> {
        if term.is_empty() {
            return Err(syntax_err(None, last_pos, "empty term"));
        }
        let (word, coeff) = parse_term(term, gens)?;
        poly.add_term(word, &coeff * sign);
        term.clear();
        Ok(())
    };
    let mut first = true;
    for t in toks {
        match t.text.as_str() {
            "(" => depth += 1,
            ")" => depth -= 1,
            _ => {}
        }
        if depth == 0 && (t.text == "+" || t.text == "-") && !term.is_empty() {
            flush(&mut term, &sign)?;
            sign = if t.text == "+" { Scalar::one() } else { -&Scalar::one() };
            first = false;
            continue;
        }
        if depth == 0 && t.text == "-" && term.is_empty() && first {
            sign = -&Scalar::one();
            first = false;
            continue;
        }
        first = false;
        term.push(t);
    }
    if depth != 0 {
        return Err(syntax_err(toks.last(), last_pos, "unbalanced parentheses"));
    }
    flush(&mut term, &sign)?;
    Ok(poly)
}

/// Split a term into `*`-separated atoms; atoms before the first generator
/// name form the scalar coefficient.
fn parse_term(toks: &[&Token], gens: &[String]) -> Result<(Word, Scalar)> {
    let mut atoms: Vec<Vec<&Token>> = vec![Vec::new()];
    let mut depth = 0i32;
    for t in toks {
        match t.text.as_str() {
            "(" => depth += 1,
            ")" => depth -= 1,
            _ => {}
        }
        if depth == 0 && t.text == "*" {
            atoms.push(Vec::new());
        } else {
            atoms.last_mut().unwrap().push(t);
        }
    }
    let is_gen = |atom: &[&Token]| -> Option<u16> {
        if atom.len() != 1 {
            return None;
        }
        gens.iter().position(|g| g == &atom[0].text).map(|i| i as u16)
    };
    let split = atoms.iter().position(|a| is_gen(a).is_some()).unwrap_or(atoms.len());
    let mut word = Word::new();
    for atom in &atoms[split..] {
        match is_gen(atom) {
            Some(g) => word.push(g),
            None => {
                let t = atom.first().copied().or_else(|| toks.first().copied()).unwrap();
                return Err(QError::UnknownGenerator {
                    line: t.line,
                    col: t.col,
                    name: atom.iter().map(|t| t.text.clone()).collect::<String>(),
                });
            }
        }
    }
    if word.is_empty() {
        let t = toks.first().unwrap();
        return Err(QError::Syntax {
            line: t.line,
            col: t.col,
            msg: "term has no generator".into(),
        });
    }
    let coeff = if split == 0 {
        Scalar::one()
    } else {
        let text: Vec<String> = atoms[..split]
            .iter()
            .map(|a| a.iter().map(|t| t.text.clone()).collect::<String>())
            .collect();
        let text = text.join("*");
        let t = atoms[0][0];
        crate::qscalar::parse_scalar(&text).map_err(|e| QError::MalformedScalar {
            line: t.line,
            col: t.col,
            msg: format!("`{text}`: {e}"),
        })?
    };
    Ok((word, coeff))
}
