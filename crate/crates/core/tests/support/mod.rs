pub mod generators;
pub mod oracle;
