//! Feature tables: loading, joining, column-group views, generation datasets,
//! filters, preprocessing and train/validation splits.
//!
//! A [`Dataset`] is immutable once built; every operation returns a new one.

mod filter;
mod generation;
mod io;
mod keywords;
mod load;
mod preprocess;
mod split;
mod table;

pub use filter::{correlation_filter, pearson, variance_filter, CorrelationFilter, NearZeroRule};
pub use generation::{build_generation_dataset, GenerationDataset, Variant, VariantSpec};
pub use io::{read_dataset_csv, schema_path, write_dataset_csv};
pub use keywords::{add_keyword_features, KeywordVocabulary, KEYWORD_COLUMN_PREFIX};
pub use load::{load_labeled_csv, load_labeled_reader, ColumnMapping, LoadReport, Loaded, RowRejection};
pub use preprocess::{
    preprocess, yeo_johnson, yeo_johnson_inverse, yeo_johnson_lambda, ColumnTransform, PreprocessStep,
    Preprocessor,
};
pub use split::{split, SplitPlan};
pub use table::{merge_on_sha, vertical_split, Column, ColumnRole, Dataset, FeatureGroup, LabeledSample};
