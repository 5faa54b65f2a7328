pub mod diagram;
pub mod exactla;
pub mod oracle;
pub mod par;
pub mod rewrite;
pub mod rootsys;
pub mod weyl;
