//! Binary trajectory dumps: a 16-byte header (magic, edge count as u32 LE,
//! frame count as u64 LE) followed by frames of ceil(edges/8) bytes, each a
//! configuration packed least-significant bit first.

use std::io::{Read, Seek, SeekFrom, Write};

use crate::configuration::Configuration;
use crate::error::{Error, Result};

pub const TRAJECTORY_MAGIC: [u8; 4] = *b"RCTJ";

pub struct TrajectoryWriter<W: Write + Seek> {
    out: W,
    num_edges: usize,
    frames: u64,
}

impl<W: Write + Seek> TrajectoryWriter<W> {
    pub fn new(mut out: W, num_edges: usize) -> Result<Self> {
        let edges = u32::try_from(num_edges).map_err(|_| Error::Capacity { size: num_edges as u64, cap: u32::MAX as u64 })?;
        out.write_all(&TRAJECTORY_MAGIC)?;
        out.write_all(&edges.to_le_bytes())?;
        out.write_all(&0u64.to_le_bytes())?;
        Ok(Self { out, num_edges, frames: 0 })
    }

    pub fn push(&mut self, config: &Configuration) -> Result<()> {
        config.check_len(self.num_edges)?;
        self.out.write_all(&config.to_bytes())?;
        self.frames += 1;
        Ok(())
    }

    /// Writes the final frame count into the header and returns the sink.
    pub fn finish(mut self) -> Result<W> {
        self.out.seek(SeekFrom::Start(8))?;
        self.out.write_all(&self.frames.to_le_bytes())?;
        self.out.seek(SeekFrom::End(0))?;
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn read_trajectory<R: Read>(mut input: R) -> Result<Vec<Configuration>> {
    let mut header = [0u8; 16];
    input.read_exact(&mut header)?;
    if header[..4] != TRAJECTORY_MAGIC {
        return Err(Error::InvalidParameter("not a trajectory file".into()));
    }
    let edges = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let frames = u64::from_le_bytes(header[8..16].try_into().unwrap());
    let mut buf = vec![0u8; edges.div_ceil(8)];
    (0..frames)
        .map(|_| {
            input.read_exact(&mut buf)?;
            Ok(Configuration::from_bytes(&buf, edges))
        })
        .collect()
}
