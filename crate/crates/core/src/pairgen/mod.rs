//! Paired flare-corrupted / flare-free samples: augmentation parameters,
//! background and flare augmentation in linear light, compositing and
//! dataset writing.

mod augment;
mod dataset;
mod params;

pub use self::augment::{
    augment_background, augment_flare, augment_flare_window, composite_pair, ExportedPair, PairedSample, SourceIds,
};
pub use self::dataset::{
    generate_dataset, list_backgrounds, pair_file_name, PairConfig, PairGenerator, PairIndex, PairPlan, PairRecord,
    DEFAULT_PAIR_SIZE, DEFAULT_TEMPLATES_PER_TYPE, INDEX_FILE, PAIRS_DIR, PAIR_LAYERS,
};
pub use self::params::{sample_params, AugmentConfig, AugmentParams};
