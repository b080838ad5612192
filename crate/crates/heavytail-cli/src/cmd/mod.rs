pub mod fit;
pub mod hill;
pub mod ingest;
pub mod network;
pub mod probe;
pub mod simulate;
pub mod taylor;
