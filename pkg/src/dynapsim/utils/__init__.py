from .buffer import ParserBuffer, TokenProducer
