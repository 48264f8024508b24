//! Signatures, object words and well-typed diagrams in slice form.
//!
//! The ambient category is strict: an object is a flat word of generators,
//! concatenation is the tensor and the empty word is the unit. A morphism is
//! stored as an input word plus an ordered list of generator applications
//! ("slices"), each placed at an offset into the current word. The output word
//! is always derived by running the slices.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rewrite::RewriteRule;

/// Index of an object generator in its signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub usize);

/// Index of a morphism generator in its signature (declaration order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub usize);

/// A tensor product of object generators; the empty word is the unit `I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectWord(Vec<ObjId>);

impl ObjectWord {
    pub fn unit() -> Self {
        ObjectWord(Vec::new())
    }

    pub fn new(gens: Vec<ObjId>) -> Self {
        ObjectWord(gens)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[ObjId] {
        &self.0
    }

    /// The tensor of two words.
    pub fn concat(&self, other: &ObjectWord) -> ObjectWord {
        let mut gens = Vec::with_capacity(self.len() + other.len());
        gens.extend_from_slice(&self.0);
        gens.extend_from_slice(&other.0);
        ObjectWord(gens)
    }

    /// Does `pattern` occur in this word starting at `offset`?
    pub fn embeds_at(&self, pattern: &ObjectWord, offset: usize) -> bool {
        offset + pattern.len() <= self.len() && self.0[offset..offset + pattern.len()] == pattern.0[..]
    }

    /// Replace `removed` wires starting at `offset` by `inserted`.
    pub(crate) fn splice(&self, offset: usize, removed: usize, inserted: &ObjectWord) -> ObjectWord {
        let mut gens = Vec::with_capacity(self.len() + inserted.len() - removed.min(self.len()));
        gens.extend_from_slice(&self.0[..offset]);
        gens.extend_from_slice(&inserted.0);
        gens.extend_from_slice(&self.0[offset + removed..]);
        ObjectWord(gens)
    }

    pub fn range(&self, start: usize, end: usize) -> ObjectWord {
        ObjectWord(self.0[start..end].to_vec())
    }
}

impl fmt::Display for ObjectWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "#{}", g.0)?;
        }
        write!(f, "]")
    }
}

impl From<Vec<ObjId>> for ObjectWord {
    fn from(gens: Vec<ObjId>) -> Self {
        ObjectWord(gens)
    }
}

/// A morphism generator `name : dom -> cod`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorGen {
    pub name: String,
    pub dom: ObjectWord,
    pub cod: ObjectWord,
}

/// A single generator application, whiskered by identities on both sides.
///
/// Field order matters: the derived ordering compares offsets first and
/// breaks ties by declaration order, which is the canonical-form key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slice {
    pub offset: usize,
    pub gen: GenId,
}

impl Slice {
    pub fn new(offset: usize, gen: GenId) -> Self {
        Slice { offset, gen }
    }
}

/// A well-typed morphism in slice normal form.
///
/// Values are immutable; every operation returns a fresh diagram. The output
/// word is computed once at construction and never set independently.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    input: ObjectWord,
    slices: Vec<Slice>,
    output: ObjectWord,
}

impl Diagram {
    /// Type-check `slices` against `input` and build the diagram.
    pub fn new(sig: &Signature, input: ObjectWord, slices: Vec<Slice>) -> Result<Diagram> {
        let output = derive_codomain(sig, &input, &slices)?;
        Ok(Diagram { input, slices, output })
    }

    /// Build a diagram whose typing the caller has already established.
    pub(crate) fn from_parts_unchecked(input: ObjectWord, slices: Vec<Slice>, output: ObjectWord) -> Diagram {
        Diagram { input, slices, output }
    }

    pub fn identity(w: ObjectWord) -> Diagram {
        Diagram {
            input: w.clone(),
            slices: Vec::new(),
            output: w,
        }
    }

    pub fn input(&self) -> &ObjectWord {
        &self.input
    }

    pub fn output(&self) -> &ObjectWord {
        &self.output
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// `(input, output)`.
    pub fn boundaries(&self) -> (&ObjectWord, &ObjectWord) {
        (&self.input, &self.output)
    }

    pub fn same_boundaries(&self, other: &Diagram) -> bool {
        self.input == other.input && self.output == other.output
    }

    /// Sequential composite in diagrammatic order: `self` first, then `g`.
    pub fn compose(&self, g: &Diagram) -> Result<Diagram> {
        if self.output != g.input {
            return Err(Error::BoundaryMismatch {
                left: self.output.clone(),
                right: g.input.clone(),
            });
        }
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&g.slices);
        Ok(Diagram {
            input: self.input.clone(),
            slices,
            output: g.output.clone(),
        })
    }

    /// Tensor product, left argument's slices first. The right argument's
    /// slices are shifted past the left argument's output wires.
    pub fn tensor(&self, g: &Diagram) -> Diagram {
        let shift = self.output.len();
        let mut slices = self.slices.clone();
        slices.extend(g.slices.iter().map(|s| Slice::new(s.offset + shift, s.gen)));
        Diagram {
            input: self.input.concat(&g.input),
            slices,
            output: self.output.concat(&g.output),
        }
    }

    /// `left ⊗ self ⊗ right` with identities on the outer words.
    pub fn whisker(&self, left: &ObjectWord, right: &ObjectWord) -> Diagram {
        Diagram::identity(left.clone())
            .tensor(self)
            .tensor(&Diagram::identity(right.clone()))
    }

    /// Words between slices: `words[0]` is the input, `words[n]` the output.
    pub fn words(&self, sig: &Signature) -> Vec<ObjectWord> {
        let mut out = Vec::with_capacity(self.slices.len() + 1);
        let mut w = self.input.clone();
        out.push(w.clone());
        for s in &self.slices {
            let g = sig.morphism(s.gen);
            w = w.splice(s.offset, g.dom.len(), &g.cod);
            out.push(w.clone());
        }
        out
    }

    /// Same diagram with every slice offset shifted by `k`.
    pub(crate) fn shifted_slices(&self, k: usize) -> impl Iterator<Item = Slice> + '_ {
        self.slices.iter().map(move |s| Slice::new(s.offset + k, s.gen))
    }
}

/// Run the slice recurrence and return the output word, or the index of the
/// first slice that does not fit.
pub fn derive_codomain(sig: &Signature, input: &ObjectWord, slices: &[Slice]) -> Result<ObjectWord> {
    for g in input.as_slice() {
        if g.0 >= sig.objects.len() {
            return Err(Error::Signature(format!("unknown object generator #{}", g.0)));
        }
    }
    let mut w = input.clone();
    for (index, s) in slices.iter().enumerate() {
        let g = sig
            .morphisms
            .get(s.gen.0)
            .ok_or_else(|| Error::Signature(format!("unknown morphism generator #{}", s.gen.0)))?;
        if !w.embeds_at(&g.dom, s.offset) {
            return Err(Error::IllTypedSlice {
                index,
                gen: g.name.clone(),
                offset: s.offset,
                word: w,
            });
        }
        w = w.splice(s.offset, g.dom.len(), &g.cod);
    }
    Ok(w)
}

/// Recompute `(input, output)` for a raw slice list.
pub fn boundaries(sig: &Signature, input: &ObjectWord, slices: &[Slice]) -> Result<(ObjectWord, ObjectWord)> {
    let out = derive_codomain(sig, input, slices)?;
    Ok((input.clone(), out))
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Object generators, morphism generators and named equations.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    objects: Vec<String>,
    morphisms: Vec<MorGen>,
    equations: Vec<RewriteRule>,
    object_index: HashMap<String, ObjId>,
    morphism_index: HashMap<String, GenId>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, name: &str) -> Result<ObjId> {
        if !is_identifier(name) {
            return Err(Error::Signature(format!("`{name}` is not a valid identifier")));
        }
        if self.object_index.contains_key(name) {
            return Err(Error::Signature(format!("duplicate object generator `{name}`")));
        }
        let id = ObjId(self.objects.len());
        self.objects.push(name.to_string());
        self.object_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_morphism(&mut self, name: &str, dom: ObjectWord, cod: ObjectWord) -> Result<GenId> {
        if !is_identifier(name) {
            return Err(Error::Signature(format!("`{name}` is not a valid identifier")));
        }
        if self.morphism_index.contains_key(name) {
            return Err(Error::Signature(format!("duplicate morphism generator `{name}`")));
        }
        for g in dom.as_slice().iter().chain(cod.as_slice()) {
            if g.0 >= self.objects.len() {
                return Err(Error::Signature(format!(
                    "unknown object generator #{} in `{name}`",
                    g.0
                )));
            }
        }
        let id = GenId(self.morphisms.len());
        self.morphisms.push(MorGen {
            name: name.to_string(),
            dom,
            cod,
        });
        self.morphism_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Register a named equation. Both sides must share their boundaries.
    pub fn add_equation(&mut self, rule: RewriteRule) -> Result<()> {
        if self.equations.iter().any(|r| r.name == rule.name) {
            return Err(Error::Signature(format!("duplicate equation `{}`", rule.name)));
        }
        if !rule.lhs.same_boundaries(&rule.rhs) {
            return Err(Error::Signature(format!(
                "equation `{}` has sides {} -> {} and {} -> {}",
                rule.name,
                self.render_word(rule.lhs.input()),
                self.render_word(rule.lhs.output()),
                self.render_word(rule.rhs.input()),
                self.render_word(rule.rhs.output()),
            )));
        }
        self.equations.push(rule);
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[MorGen] {
        &self.morphisms
    }

    pub fn equations(&self) -> &[RewriteRule] {
        &self.equations
    }

    pub fn equation(&self, name: &str) -> Option<&RewriteRule> {
        self.equations.iter().find(|r| r.name == name)
    }

    pub fn object(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn gen(&self, name: &str) -> Option<GenId> {
        self.morphism_index.get(name).copied()
    }

    pub fn morphism(&self, id: GenId) -> &MorGen {
        &self.morphisms[id.0]
    }

    pub fn object_name(&self, id: ObjId) -> &str {
        &self.objects[id.0]
    }

    /// Resolve a word from generator names.
    pub fn word(&self, names: &[&str]) -> Result<ObjectWord> {
        names
            .iter()
            .map(|n| {
                self.object(n)
                    .ok_or_else(|| Error::Signature(format!("unknown object generator `{n}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(ObjectWord)
    }

    /// The one-slice diagram of a generator on its own domain.
    pub fn generator(&self, id: GenId) -> Diagram {
        let g = self.morphism(id);
        Diagram {
            input: g.dom.clone(),
            slices: vec![Slice::new(0, id)],
            output: g.cod.clone(),
        }
    }

    /// Generator diagram by name.
    pub fn generator_named(&self, name: &str) -> Result<Diagram> {
        let id = self
            .gen(name)
            .ok_or_else(|| Error::Signature(format!("unknown morphism generator `{name}`")))?;
        Ok(self.generator(id))
    }

    /// Space-separated generator names; the unit prints as `1`.
    pub fn render_word(&self, w: &ObjectWord) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.as_slice()
            .iter()
            .map(|g| self.objects.get(g.0).map(String::as_str).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Compact slice listing, e.g. `[A X] eta@2 beta@1 eps@0`.
    pub fn render_diagram(&self, d: &Diagram) -> String {
        let mut out = format!("[{}]", self.render_word(d.input()));
        for s in d.slices() {
            out.push_str(&format!(" {}@{}", self.morphism(s.gen).name, s.offset));
        }
        out
    }

    /// Render an error with generator names in place of raw ids.
    pub fn describe_error(&self, e: &Error) -> String {
        match e {
            Error::IllTypedSlice {
                index,
                gen,
                offset,
                word,
            } => format!(
                "typing error at slice {index}: `{gen}` at offset {offset} does not fit the word [{}]",
                self.render_word(word)
            ),
            Error::BoundaryMismatch { left, right } => format!(
                "boundary mismatch: [{}] vs [{}]",
                self.render_word(left),
                self.render_word(right)
            ),
            other => other.to_string(),
        }
    }
}
