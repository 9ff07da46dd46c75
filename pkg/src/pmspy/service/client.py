# -*- coding: utf-8

"""Module for the HTTP client of the permission management system.

SPDX-License-Identifier: MIT
"""
import httpx

from pmspy.tools import logger
from pmspy.tools.helpers import ServiceError


class ServiceClient:
    r"""
    Client of the HTTP interface.

    Parameters
    ----------
    base_url : str
        Service address, e.g. :code:`http://127.0.0.1:8642`.

    admin_token : str
        Bearer token for the admin endpoints.

    client : httpx.Client
        Client to send the requests with, e.g. a
        :code:`fastapi.testclient.TestClient`. Created from base_url if not
        given.
    """

    def __init__(self, base_url='', admin_token=None, client=None):
        if client is None:
            client = httpx.Client(base_url=base_url)
        self.client = client
        self.admin_token = admin_token

    def _headers(self):
        if self.admin_token is None:
            return {}
        return {'Authorization': f"Bearer {self.admin_token}"}

    def _send(self, method, url, **kwargs):
        response = self.client.request(
            method, url, headers=self._headers(), **kwargs
        )
        if response.status_code >= 400:
            try:
                body = response.json()
            except ValueError:
                body = {'error': 'HTTPError', 'detail': response.text}
            err = ServiceError(
                response.status_code, body.get('error'), body.get('detail')
            )
            logger.error(str(err))
            raise err
        return response.json()

    def check(self, request):
        r"""
        Post an access request.

        Parameters
        ----------
        request : pmspy.decisions.decision.AccessRequest

        Returns
        -------
        body : dict
            :code:`outcome`, :code:`reason` and :code:`matched`.
        """
        return self._send('POST', '/v1/check', json=request_body(request))

    def decide(self, request):
        """Return the outcome string of an access request."""
        return self.check(request)['outcome']

    def mutate(self, op, *operands):
        """Apply a graph mutation, return the new graph version."""
        if op == 'add_node':
            key, *entries = operands
            body = self._send(
                'POST', '/v1/admin/nodes',
                json={'key': key, 'entries': list(entries)}
            )
        elif op == 'remove_node':
            body = self._send('DELETE', f"/v1/admin/nodes/{operands[0]}")
        elif op == 'add_edge':
            body = self._send(
                'POST', '/v1/admin/edges',
                json={'child': operands[0], 'parent': operands[1]}
            )
        elif op == 'remove_edge':
            body = self._send(
                'DELETE', '/v1/admin/edges',
                params={'child': operands[0], 'parent': operands[1]}
            )
        elif op in ('grant', 'revoke'):
            body = self._send(
                'POST', f"/v1/admin/{op}",
                json={'node': operands[0], 'entry': operands[1]}
            )
        else:
            msg = f"Unknown graph mutation '{op}'."
            logger.error(msg)
            raise ValueError(msg)
        return body['version']

    def effective(self, key):
        """Return the canonical effective entries of a node."""
        return self._send('GET', f"/v1/effective/{key}")['entries']

    def audit(self, consumer, start=None, end=None):
        params = {
            k: v for k, v in (('from', start), ('to', end)) if v is not None
        }
        return self._send('GET', f"/v1/audit/{consumer}", params=params)

    def issue_key(self, action_point, request):
        body = dict(request_body(request), action_point=action_point)
        return self._send('POST', '/v1/keys/issue', json=body)

    def verify_key(self, key_id):
        return self._send('GET', f"/v1/keys/{key_id}/verify")['state']

    def health(self):
        return self._send('GET', '/v1/healthz')


def request_body(request):
    """Return the JSON body of an AccessRequest."""
    action = request.action
    return {
        'consumer': str(request.consumer),
        'base': action.base,
        'identifier': action.identifier,
        'scope': action.scope,
        'level': action.level.value,
        'value': None if action.value is None else str(action.value),
    }
