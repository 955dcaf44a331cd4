pub mod data;
pub mod oracle;
