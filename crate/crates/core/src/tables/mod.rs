//! Count tables: the hybrid dense/hash word-topic table n_kw, per-document
//! sparse topic counts n_kd, and the global summary row n_k.

mod doc_topic;
mod summary;
mod word_topic;

pub use doc_topic::{ActiveDoc, DocScratch, DocState, DocTopicSparse};
pub use summary::SummaryRow;
pub use word_topic::{classify_words, Classification, RowKind, WordTopicTable};
