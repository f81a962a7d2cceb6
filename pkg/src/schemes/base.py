from abc import ABC, abstractmethod

from ..errors import FramingError
from ..words import Word


class StreamEncoder(ABC):
    """Stateful encoder fed with whole message blocks, in order"""

    @abstractmethod
    def feed(self, msg: Word) -> Word:
        """Encode the next message bits; len(msg) must be a multiple of the block size"""
        pass

    def finish(self) -> Word:
        """Flush whatever the scheme appends after the last block"""
        return Word()


class BlockScheme(ABC):
    scheme_id: int = 0
    name: str = ""

    @property
    @abstractmethod
    def message_block(self) -> int:
        """Message bits consumed per block"""
        pass

    @property
    @abstractmethod
    def code_block(self) -> int:
        """Coded bits produced per block"""
        pass

    @abstractmethod
    def encoder(self) -> StreamEncoder:
        pass

    @abstractmethod
    def decode(self, code: Word) -> Word:
        pass

    def encode(self, msg: Word) -> Word:
        enc = self.encoder()
        return enc.feed(msg) + enc.finish()

    def coded_length(self, message_bits: int) -> int:
        """Coded length for a message already padded to the block size"""
        self.check_framing(message_bits)
        return message_bits // self.message_block * self.code_block

    def check_framing(self, message_bits: int):
        if message_bits % self.message_block:
            raise FramingError(
                f"{self.name} scheme needs a multiple of {self.message_block} message bits, got {message_bits}"
            )
