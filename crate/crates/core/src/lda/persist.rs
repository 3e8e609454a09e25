//! Model files: the topic table as JSON, a topic report as CSV, and the
//! per-token assignments as a little-endian binary sidecar.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{rank_words, LdaConfig, LdaError, LdaModel, Vocabulary};

/// Digits after the decimal point for persisted probabilities.
pub const PROBABILITY_DECIMALS: usize = 10;

fn fixed(x: f64) -> String {
    format!("{:.*}", PROBABILITY_DECIMALS, x)
}

struct Fixed(f64);

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(fixed(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

/// Config, vocabulary and topic-word matrix of a fitted model.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TopicTable {
    pub config: LdaConfig,
    pub vocabulary: Vocabulary,
    /// K × V, row-major.
    pub phi: Vec<Vec<f64>>,
}

impl Serialize for TopicTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            config: &'a LdaConfig,
            vocabulary: &'a Vocabulary,
            phi: Vec<Vec<Fixed>>,
        }
        Out {
            config: &self.config,
            vocabulary: &self.vocabulary,
            phi: self
                .phi
                .iter()
                .map(|row| row.iter().map(|&p| Fixed(p)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl TopicTable {
    pub fn top_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>, LdaError> {
        rank_words(&self.phi, &self.vocabulary, topic, n)
    }

    pub fn num_topics(&self) -> usize {
        self.phi.len()
    }

    pub fn to_writer<W: Write>(&self, mut out: W) -> Result<(), LdaError> {
        serde_json::to_writer(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn from_reader<R: Read>(input: R) -> Result<Self, LdaError> {
        let t: Self = serde_json::from_reader(input)?;
        if t.phi.len() != t.config.k || t.phi.iter().any(|r| r.len() != t.vocabulary.len()) {
            return Err(LdaError::InvalidVocabulary("phi shape does not match K × V".into()));
        }
        Ok(t)
    }
}

/// `topic_id,rank,word,probability` rows, `n` per topic, rank starting at 1.
pub fn write_topics_csv<W: Write>(table: &TopicTable, n: usize, out: W) -> Result<(), LdaError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| LdaError::Io(e.into());
    w.write_record(["topic_id", "rank", "word", "probability"])
        .map_err(io)?;
    for k in 0..table.num_topics() {
        for (rank, (word, p)) in table.top_words(k, n)?.into_iter().enumerate() {
            w.write_record([k.to_string(), (rank + 1).to_string(), word, fixed(p)])
                .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

const ASSIGNMENTS_MAGIC: &[u8; 4] = b"LDAZ";
const ASSIGNMENTS_VERSION: u32 = 1;

/// Layout (all `u32` little-endian): magic `LDAZ`, version, document count,
/// then per document its input position, its length, and one topic id per
/// token.
pub fn write_assignments<W: Write>(model: &LdaModel, mut out: W) -> Result<(), LdaError> {
    out.write_all(ASSIGNMENTS_MAGIC)?;
    out.write_all(&ASSIGNMENTS_VERSION.to_le_bytes())?;
    out.write_all(&(model.assignments.len() as u32).to_le_bytes())?;
    for (z, &pos) in model.assignments.iter().zip(&model.doc_index) {
        out.write_all(&(pos as u32).to_le_bytes())?;
        out.write_all(&(z.len() as u32).to_le_bytes())?;
        for &t in z {
            out.write_all(&t.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a sidecar back as `(input position, topic ids)` pairs.
pub fn read_assignments<R: Read>(mut input: R) -> Result<Vec<(usize, Vec<u32>)>, LdaError> {
    let mut word = [0u8; 4];
    let mut next = |input: &mut R| -> Result<u32, LdaError> {
        input
            .read_exact(&mut word)
            .map_err(|e| LdaError::BadAssignments(e.to_string()))?;
        Ok(u32::from_le_bytes(word))
    };
    let mut magic = [0u8; 4];
    input
        .read_exact(&mut magic)
        .map_err(|e| LdaError::BadAssignments(e.to_string()))?;
    if &magic != ASSIGNMENTS_MAGIC {
        return Err(LdaError::BadAssignments("bad magic".into()));
    }
    let version = next(&mut input)?;
    if version != ASSIGNMENTS_VERSION {
        return Err(LdaError::BadAssignments(format!("unsupported version {version}")));
    }
    let docs = next(&mut input)? as usize;
    let mut out = Vec::with_capacity(docs);
    for _ in 0..docs {
        let pos = next(&mut input)? as usize;
        let len = next(&mut input)? as usize;
        let z = (0..len).map(|_| next(&mut input)).collect::<Result<_, _>>()?;
        out.push((pos, z));
    }
    Ok(out)
}
